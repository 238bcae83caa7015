/**
 * Development server: serves the static frontend and proxies /api to
 * the graph service so the browser talks to a single origin.
 */

import { fileURLToPath } from "node:url";
import path from "node:path";

import express, { type Express } from "express";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const FRONTEND_ROOT = path.resolve(HERE, "..");

export function createDevServer(apiBase: string, root: string = FRONTEND_ROOT): Express {
  const server = express();
  server.use(express.raw({ type: "*/*", limit: "10mb" }));

  server.use("/api", async (req, res) => {
    const target = `${apiBase}/api${req.url}`;
    const init: RequestInit = { method: req.method, headers: {} };
    if (req.method !== "GET" && req.method !== "HEAD" && Buffer.isBuffer(req.body)) {
      init.body = new Uint8Array(req.body);
      init.headers = { "content-type": req.get("content-type") ?? "application/json" };
    }
    try {
      const upstream = await fetch(target, init);
      res.status(upstream.status);
      upstream.headers.forEach((value, name) => {
        // hop-by-hop framing is the local server's business
        if (name === "transfer-encoding" || name === "content-length") return;
        res.setHeader(name, value);
      });
      res.send(Buffer.from(await upstream.arrayBuffer()));
    } catch (error) {
      res.status(502).json({
        error: { code: "upstream_unreachable", detail: String(error) },
      });
    }
  });

  server.use(express.static(root));
  server.use("/node_modules", express.static(path.join(root, "node_modules")));
  return server;
}

function cliValue(flag: string, fallback: string): string {
  const index = process.argv.indexOf(flag);
  const value = index >= 0 ? process.argv[index + 1] : undefined;
  return value ?? fallback;
}

if (process.argv[1] && import.meta.url === new URL(`file://${process.argv[1]}`).href) {
  const port = Number(cliValue("--port", "5173"));
  const api = cliValue("--api", "http://127.0.0.1:8008");
  createDevServer(api).listen(port, () => {
    console.log(`frontend at http://127.0.0.1:${port} (api proxy -> ${api})`);
  });
}
