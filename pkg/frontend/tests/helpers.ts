/** Test helpers: a tiny route-based fetch mock for the /v1 API. */
import { vi } from "vitest";

export interface RecordedCall {
  method: string;
  path: string;
  body: unknown;
}

export type RouteHandler = (body: unknown, call: RecordedCall) => unknown;

export interface MockApi {
  calls: RecordedCall[];
  route(method: string, path: string, handler: RouteHandler | unknown, status?: number): void;
}

export function installMockApi(): MockApi {
  const routes = new Map<string, { handler: RouteHandler; status: number }>();
  const calls: RecordedCall[] = [];

  const fetchMock = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const path = String(input);
    const method = (init?.method ?? "GET").toUpperCase();
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    const call: RecordedCall = { method, path, body };
    calls.push(call);
    const route = routes.get(`${method} ${path}`);
    if (!route) {
      return new Response(JSON.stringify({ error: "NotFound", detail: `no mock for ${method} ${path}` }), {
        status: 404,
        headers: { "content-type": "application/json" },
      });
    }
    const payload = route.handler(body, call);
    return new Response(JSON.stringify(payload), {
      status: route.status,
      headers: { "content-type": "application/json" },
    });
  });
  vi.stubGlobal("fetch", fetchMock);

  return {
    calls,
    route(method, path, handler, status = 200) {
      const fn: RouteHandler = typeof handler === "function" ? (handler as RouteHandler) : () => handler;
      routes.set(`${method.toUpperCase()} ${path}`, { handler: fn, status });
    },
  };
}

export function container(): HTMLElement {
  const host = document.createElement("div");
  document.body.append(host);
  return host;
}
