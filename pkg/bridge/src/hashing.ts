/**
 * Deterministic hashed sentence encoder.
 *
 * Mirrors the engine's built-in reference encoder bit-for-bit (modulo float
 * summation order in the norm): content tokens are feature-hashed into
 * `dim` buckets with ±1 signs derived from blake2b-512 of `${seed}|${token}`
 * (first 8 digest bytes, little-endian), then L2-normalized.
 */

import { createHash } from "node:crypto";

// Keep in sync with the engine's stopword list.
export const STOPWORDS = new Set<string>([
  "a", "about", "above", "across", "after", "again", "against", "ain", "all",
  "already", "also", "although", "always", "am", "amid", "among", "an", "and",
  "any", "are", "aren", "as", "at", "be", "because", "been", "before",
  "being", "below", "between", "both", "but", "by", "can", "could", "couldn",
  "d", "despite", "did", "didn", "do", "does", "doesn", "doing", "don",
  "down", "dr", "during", "each", "even", "ever", "few", "first", "for",
  "from", "further", "had", "hadn", "has", "hasn", "have", "haven", "having",
  "he", "her", "here", "hers", "herself", "him", "himself", "his", "how",
  "however", "i", "if", "in", "into", "is", "isn", "it", "its", "itself",
  "just", "last", "ll", "m", "ma", "many", "may", "me", "might", "mightn",
  "more", "most", "mr", "mrs", "ms", "much", "must", "mustn", "my", "myself",
  "needn", "never", "new", "next", "no", "nor", "not", "now", "o", "of",
  "off", "old", "on", "once", "one", "only", "or", "other", "our", "ours",
  "ourselves", "out", "over", "own", "per", "re", "s", "said", "same", "say",
  "says", "several", "shall", "shan", "she", "should", "shouldn", "since",
  "so", "some", "still", "such", "t", "than", "that", "the", "their",
  "theirs", "them", "themselves", "then", "there", "these", "they", "this",
  "those", "though", "three", "through", "to", "too", "toward", "towards",
  "two", "under", "until", "up", "upon", "us", "ve", "very", "via", "was",
  "wasn", "we", "were", "weren", "what", "when", "where", "which", "while",
  "who", "whom", "why", "will", "with", "within", "without", "won", "would",
  "wouldn", "y", "yet", "you", "your", "yours", "yourself", "yourselves",
]);

// Letters/digits/marks with interior hyphens retained; underscores excluded.
const TOKEN_RE = /[\p{L}\p{N}\p{M}]+(?:-[\p{L}\p{N}\p{M}]+)*/gu;

export function contentTokens(sentence: string): string[] {
  const tokens = sentence.toLowerCase().match(TOKEN_RE) ?? [];
  return tokens.filter((t) => !STOPWORDS.has(t));
}

const digestCache = new Map<string, bigint>();

function digest64(seed: number, token: string): bigint {
  const key = `${seed}|${token}`;
  const cached = digestCache.get(key);
  if (cached !== undefined) return cached;
  const digest = createHash("blake2b512").update(key, "utf8").digest();
  const h = digest.readBigUInt64LE(0);
  digestCache.set(key, h);
  return h;
}

export class EmptySentenceError extends Error {}

export function hashedEncode(sentence: string, dim: number, seed: number): Float64Array {
  const tokens = contentTokens(sentence);
  if (tokens.length === 0) {
    throw new EmptySentenceError(`sentence has no surviving tokens: ${JSON.stringify(sentence)}`);
  }
  const vec = new Float64Array(dim);
  const dimBig = BigInt(dim);
  for (const token of tokens) {
    const h = digest64(seed, token);
    const idx = Number((h & 0xffffffffn) % dimBig);
    vec[idx] += (h >> 63n) & 1n ? 1.0 : -1.0;
  }
  let sumSq = 0.0;
  for (let i = 0; i < dim; i++) sumSq += vec[i] * vec[i];
  let norm = Math.sqrt(sumSq);
  if (norm === 0.0) {
    // opposite-sign collisions cancelled; deterministic single-bucket fallback
    let idx = dim;
    for (const token of tokens) {
      idx = Math.min(idx, Number((digest64(seed, token) & 0xffffffffn) % dimBig));
    }
    vec[idx] = 1.0;
    norm = 1.0;
  }
  for (let i = 0; i < dim; i++) vec[i] /= norm;
  return vec;
}

export interface Encoder {
  readonly dim: number;
  readonly model: string;
  encodeBatch(sentences: string[]): number[][];
}

export class HashedEncoder implements Encoder {
  readonly model: string;

  constructor(readonly dim: number, readonly seed: number) {
    this.model = `hashed-${dim}-seed${seed}`;
  }

  encodeBatch(sentences: string[]): number[][] {
    return sentences.map((s) => Array.from(hashedEncode(s, this.dim, this.seed)));
  }
}

/** Parse a model identifier; only the deterministic hashed family ships. */
export function makeEncoder(model: string, dim: number, seed: number): Encoder {
  if (model === "hashed") return new HashedEncoder(dim, seed);
  throw new Error(`unknown model ${JSON.stringify(model)}; available: "hashed"`);
}
