import { AddressInfo } from "node:net";
import { Server } from "node:http";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { HashedEncoder, hashedEncode } from "../src/hashing.js";
import { createBridgeServer } from "../src/server.js";

const DIM = 48;
const SEED = 9;
let server: Server;
let endpoint: string;

beforeAll(async () => {
  server = createBridgeServer(new HashedEncoder(DIM, SEED), 64);
  await new Promise<void>((resolve) => server.listen(0, "127.0.0.1", resolve));
  const { port } = server.address() as AddressInfo;
  endpoint = `http://127.0.0.1:${port}`;
});

afterAll(() => new Promise<void>((resolve) => server.close(() => resolve())));

async function embed(sentences: unknown): Promise<Response> {
  return fetch(`${endpoint}/embed`, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify({ sentences }),
  });
}

describe("healthz", () => {
  it("reports dim and model", async () => {
    const res = await fetch(`${endpoint}/healthz`);
    expect(res.status).toBe(200);
    const body = await res.json();
    expect(body.dim).toBe(DIM);
    expect(typeof body.model).toBe("string");
  });
});

describe("embed", () => {
  it("returns unit-norm vectors in request order", async () => {
    const sentences = ["storm surge flooding", "election results delayed", "rescue crews arrive"];
    const res = await embed(sentences);
    expect(res.status).toBe(200);
    const body = await res.json();
    expect(body.dim).toBe(DIM);
    expect(body.vectors).toHaveLength(sentences.length);
    for (let i = 0; i < sentences.length; i++) {
      const want = Array.from(hashedEncode(sentences[i], DIM, SEED));
      expect(body.vectors[i]).toEqual(want);
      const n = Math.sqrt(body.vectors[i].reduce((s: number, x: number) => s + x * x, 0));
      expect(Math.abs(n - 1)).toBeLessThanOrEqual(1e-6);
    }
  });

  it("is deterministic for repeated sentences", async () => {
    const res = await embed(["flood warning", "flood warning"]);
    const body = await res.json();
    expect(body.vectors[0]).toEqual(body.vectors[1]);
  });

  it("preserves order across internal batches", async () => {
    const sentences = Array.from({ length: 300 }, (_, i) => `tok${i} filler${i % 7}`);
    const res = await embed(sentences);
    const body = await res.json();
    expect(body.vectors).toHaveLength(300);
    for (const i of [0, 63, 64, 150, 299]) {
      const single = await embed([sentences[i]]);
      const one = (await single.json()).vectors[0];
      expect(body.vectors[i]).toEqual(one);
    }
  });

  it("rejects an empty sentence with a 400 naming the index", async () => {
    const res = await embed(["fine sentence", "   "]);
    expect(res.status).toBe(400);
    const body = await res.json();
    expect(body.error).toContain("index 1");
  });

  it("rejects malformed bodies", async () => {
    const res = await fetch(`${endpoint}/embed`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: "{not json",
    });
    expect(res.status).toBe(400);
    const missing = await embed("not-a-list" as unknown);
    expect(missing.status).toBe(400);
  });

  it("404s unknown routes", async () => {
    const res = await fetch(`${endpoint}/nope`);
    expect(res.status).toBe(404);
  });
});
