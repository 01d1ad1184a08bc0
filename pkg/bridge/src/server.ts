/**
 * Embedding bridge: serves a sentence encoder behind the engine's wire
 * protocol.
 *
 *   GET  /healthz          -> 200 {"dim": <int>, "model": "<name>"}
 *   POST /embed            <- {"sentences": ["...", ...]}
 *                          -> {"dim": <int>, "vectors": [[...], ...]}
 *
 * Vectors are unit-norm, in request order; an empty sentence fails the whole
 * request with a 400 naming its index. Requests are stateless; batching is
 * internal and invisible to clients.
 */

import { createServer, IncomingMessage, Server, ServerResponse } from "node:http";

import { Encoder, EmptySentenceError, makeEncoder } from "./hashing.js";

export interface BridgeConfig {
  model: string;
  port: number;
  dim: number;
  seed: number;
  maxBatch: number;
  device?: string; // accepted for parity with GPU-backed encoders; unused here
}

export const DEFAULTS: BridgeConfig = {
  model: "hashed",
  port: 8765,
  dim: 256,
  seed: 42,
  maxBatch: 64,
};

function sendJson(res: ServerResponse, status: number, payload: unknown): void {
  const body = JSON.stringify(payload);
  res.writeHead(status, {
    "content-type": "application/json",
    "content-length": Buffer.byteLength(body),
  });
  res.end(body);
}

function readBody(req: IncomingMessage): Promise<string> {
  return new Promise((resolve, reject) => {
    const chunks: Buffer[] = [];
    req.on("data", (c: Buffer) => chunks.push(c));
    req.on("end", () => resolve(Buffer.concat(chunks).toString("utf8")));
    req.on("error", reject);
  });
}

function validateSentences(payload: unknown): string[] | { error: string } {
  if (typeof payload !== "object" || payload === null
      || !Array.isArray((payload as { sentences?: unknown }).sentences)) {
    return { error: "body must be {\"sentences\": [...]}" };
  }
  const sentences = (payload as { sentences: unknown[] }).sentences;
  for (let i = 0; i < sentences.length; i++) {
    const s = sentences[i];
    if (typeof s !== "string" || s.trim().length === 0) {
      return { error: `empty sentence at index ${i}` };
    }
  }
  return sentences as string[];
}

export function createBridgeServer(encoder: Encoder, maxBatch: number): Server {
  return createServer(async (req, res) => {
    try {
      if (req.method === "GET" && req.url === "/healthz") {
        sendJson(res, 200, { dim: encoder.dim, model: encoder.model });
        return;
      }
      if (req.method === "POST" && req.url === "/embed") {
        let payload: unknown;
        try {
          payload = JSON.parse(await readBody(req));
        } catch {
          sendJson(res, 400, { error: "invalid JSON body" });
          return;
        }
        const sentences = validateSentences(payload);
        if (!Array.isArray(sentences)) {
          sendJson(res, 400, sentences);
          return;
        }
        const vectors: number[][] = [];
        for (let i = 0; i < sentences.length; i += maxBatch) {
          vectors.push(...encoder.encodeBatch(sentences.slice(i, i + maxBatch)));
        }
        sendJson(res, 200, { dim: encoder.dim, vectors });
        return;
      }
      sendJson(res, 404, { error: `no route for ${req.method} ${req.url}` });
    } catch (err) {
      if (err instanceof EmptySentenceError) {
        sendJson(res, 400, { error: err.message });
      } else {
        sendJson(res, 500, { error: String(err) });
      }
    }
  });
}

function parseArgs(argv: string[]): BridgeConfig {
  const config = { ...DEFAULTS };
  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i];
    const value = argv[i + 1];
    if (value === undefined) throw new Error(`missing value for ${flag}`);
    switch (flag) {
      case "--model": config.model = value; break;
      case "--port": config.port = Number(value); break;
      case "--dim": config.dim = Number(value); break;
      case "--seed": config.seed = Number(value); break;
      case "--max-batch": config.maxBatch = Number(value); break;
      case "--device": config.device = value; break;
      default: throw new Error(`unknown flag ${flag}`);
    }
  }
  if (!Number.isInteger(config.dim) || config.dim < 1) throw new Error("--dim must be a positive integer");
  if (!Number.isInteger(config.maxBatch) || config.maxBatch < 1) throw new Error("--max-batch must be a positive integer");
  return config;
}

export function main(argv: string[]): void {
  let config: BridgeConfig;
  let encoder: Encoder;
  try {
    config = parseArgs(argv);
    encoder = makeEncoder(config.model, config.dim, config.seed);
  } catch (err) {
    console.error(`bridge startup failed: ${err instanceof Error ? err.message : err}`);
    process.exit(1);
  }
  const server = createBridgeServer(encoder, config.maxBatch);
  server.listen(config.port, () => {
    console.log(`bridge serving ${encoder.model} (dim=${encoder.dim}) on port ${config.port}`);
  });
  const shutdown = () => server.close(() => process.exit(0));
  process.on("SIGINT", shutdown);
  process.on("SIGTERM", shutdown);
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("server.js") || entry.endsWith("server.ts")) {
  main(process.argv.slice(2));
}
