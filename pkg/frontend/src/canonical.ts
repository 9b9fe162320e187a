/**
 * Canonical JSON serialization matching the server side (keys sorted,
 * ", " and ": " separators), so exported session JSON is byte-identical to
 * what any other client of the same service would export.
 */

export function canonicalJson(value: unknown): string {
  if (value === null || typeof value === "boolean") {
    return JSON.stringify(value);
  }
  if (typeof value === "number") {
    if (!Number.isFinite(value)) {
      throw new Error("cannot serialize non-finite number");
    }
    return Number.isInteger(value) ? value.toFixed(0) : JSON.stringify(value);
  }
  if (typeof value === "string") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(", ") + "]";
  }
  if (typeof value === "object") {
    const record = value as Record<string, unknown>;
    const keys = Object.keys(record).sort();
    const parts = keys.map(
      (key) => JSON.stringify(key) + ": " + canonicalJson(record[key]),
    );
    return "{" + parts.join(", ") + "}";
  }
  throw new Error(`cannot serialize value of type ${typeof value}`);
}
