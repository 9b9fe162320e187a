/**
 * Display formatting for server-supplied Laurent term lists.
 *
 * The UI never computes algebra: these helpers only regroup the exponent data
 * the service sent into a numerator/denominator presentation, with frozen
 * factors in the denominator flagged so quasi-cluster prefactors stand out.
 */

import type { TermJson } from "./types.js";

export interface FractionDisplay {
  numerator: string;
  denominator: string;
  denominatorFrozenPart: string;
  denominatorUnfrozenPart: string;
  text: string;
}

function monomialString(names: string[], exponents: number[]): string {
  const factors: string[] = [];
  names.forEach((name, i) => {
    const e = exponents[i];
    if (e === 0) {
      return;
    }
    factors.push(e === 1 ? name : `${name}^${e}`);
  });
  return factors.join("·");
}

function termString(
  names: string[],
  term: TermJson,
  shift: number[],
): string {
  const exponents = term.exponents.map((e, i) => e + shift[i]);
  const monomial = monomialString(names, exponents);
  if (!monomial) {
    return term.coeff;
  }
  if (term.coeff === "1") {
    return monomial;
  }
  if (term.coeff === "-1") {
    return `-${monomial}`;
  }
  return `${term.coeff}·${monomial}`;
}

/** Split a Laurent term list into numerator and monomial denominator. */
export function fractionDisplay(
  names: string[],
  terms: TermJson[],
  unfrozenCount: number,
): FractionDisplay {
  if (terms.length === 0) {
    return {
      numerator: "0",
      denominator: "",
      denominatorFrozenPart: "",
      denominatorUnfrozenPart: "",
      text: "0",
    };
  }
  const shift = names.map((_, i) =>
    Math.max(0, ...terms.map((t) => -t.exponents[i])),
  );
  const numerator = terms
    .map((t) => termString(names, t, shift))
    .join(" + ")
    .replace(/\+ -/g, "− ");
  const frozenShift = shift.map((s, i) => (i < unfrozenCount ? 0 : s));
  const unfrozenShift = shift.map((s, i) => (i < unfrozenCount ? s : 0));
  const denominator = monomialString(names, shift);
  const denominatorFrozenPart = monomialString(names, frozenShift);
  const denominatorUnfrozenPart = monomialString(names, unfrozenShift);
  const text = denominator ? `(${numerator})/${denominator}` : numerator;
  return {
    numerator,
    denominator,
    denominatorFrozenPart,
    denominatorUnfrozenPart,
    text,
  };
}

/** A ratio of two term lists (used for hatted variables). */
export function ratioText(
  names: string[],
  num: TermJson[],
  den: TermJson[],
  unfrozenCount: number,
): string {
  const top = fractionDisplay(names, num, unfrozenCount).text;
  const bottom = fractionDisplay(names, den, unfrozenCount).text;
  if (bottom === "1") {
    return top;
  }
  return `${top} / ${bottom}`;
}
