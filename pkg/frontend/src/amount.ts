/**
 * Slider-side helpers for FLOP amounts kept as decimal strings.
 *
 * The client never does threshold arithmetic; these conversions exist only
 * to position sliders on a log scale and to format the values they emit.
 */

/** log10 of a decimal FLOP string; NaN when unparseable or non-positive. */
export function log10OfAmount(text: string | number): number {
  const n = typeof text === "number" ? text : Number(text);
  if (!Number.isFinite(n) || n <= 0) return NaN;
  return Math.log10(n);
}

/** Render a slider position as a decimal string the server accepts. */
export function amountFromLog10(log10: number): string {
  if (!Number.isFinite(log10)) throw new Error(`bad log10 value ${log10}`);
  const exp = Math.floor(log10);
  let mantissa = Math.pow(10, log10 - exp);
  // keep 10 significant digits; enough to round-trip slider grids
  let m = mantissa.toPrecision(10);
  if (Number(m) >= 10) {
    return formatParts(Number(m) / 10, exp + 1);
  }
  return formatParts(Number(m), exp);
}

function formatParts(mantissa: number, exp: number): string {
  let text = mantissa.toPrecision(10).replace(/0+$/, "").replace(/\.$/, "");
  return `${text}e${exp}`;
}

/** True when the string parses as a positive finite amount. */
export function isValidAmount(text: string | number): boolean {
  return Number.isFinite(log10OfAmount(text));
}
