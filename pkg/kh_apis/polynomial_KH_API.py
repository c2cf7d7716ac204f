# -*- coding: utf-8 -*-`

#  This library is free software; you can redistribute it and/or
#  modify it under the terms of the GNU Lesser General Public
#  License as published by the Free Software Foundation; either
#  version 3.0 of the License, or (at your option) any later version.
#
#  This library is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
#  Lesser General Public License for more details.

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations, product
from typing import Callable

from tqdm import tqdm

from helpers import KHError, logger_global
from kh_apis.diagram_KH_API import resolution_circles


class ExpansionGuardError(KHError):
    pass


class CorpusError(KHError):
    pass


class LaurentPoly:
    """
    Laurent polynomial in q with integer coefficients, stored as a map from
    exponent to coefficient without zero entries.
    """

    __slots__ = ('_terms',)

    def __init__(self, terms=None):
        self._terms = {int(e): int(c) for e, c in dict(terms or {}).items() if c != 0}

    @classmethod
    def monomial(cls, exponent, coefficient=1):
        return cls({exponent: coefficient})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def q(cls):
        return cls({1: 1})

    def items(self):
        return sorted(self._terms.items())

    def coefficient(self, exponent):
        return self._terms.get(exponent, 0)

    def is_zero(self):
        return not self._terms

    @staticmethod
    def _coerce(other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly({0: other})
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, 0) + c
        return LaurentPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                terms[e1 + e2] = terms.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if exponent < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            if abs(c) != 1:
                raise ValueError("only unit monomials have Laurent inverses")
            return LaurentPoly({e * exponent: c ** (-exponent)})
        result = LaurentPoly.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def shift(self, k):
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def mirror(self):
        return LaurentPoly({-e: c for e, c in self._terms.items()})

    def evaluate(self, value):
        value = Fraction(value)
        return sum((c * value ** e for e, c in self._terms.items()), Fraction(0))

    def __repr__(self):
        return f"LaurentPoly({dict(self.items())})"

    def __str__(self):
        if not self._terms:
            return '0'
        parts = []
        for e, c in self.items():
            magnitude = abs(c)
            if e == 0:
                body = str(magnitude)
            else:
                power = 'q' if e == 1 else f'q^{e}'
                body = power if magnitude == 1 else f'{magnitude}{power}'
            if not parts:
                parts.append(f'-{body}' if c < 0 else body)
            else:
                parts.append(f"{'-' if c < 0 else '+'} {body}")
        return ' '.join(parts)


UNKNOT_FACTOR = LaurentPoly({1: 1, -1: 1})

# bounded memo of bracket state sums, keyed by (crossings, loops)
BRACKET_CACHE_SIZE = 4096


@dataclass(frozen=True)
class ScalarInvariant:
    name: str
    evaluate: Callable


@dataclass(frozen=True)
class OrderReport:
    invariant: str
    order: int
    values: tuple
    witnesses: tuple
    verdict: str

    @property
    def consistent(self):
        return not self.witnesses

    def to_records(self):
        records = [{'stratum': stratum, 'value': str(value)} for stratum, value in self.values]
        records.append({'invariant': self.invariant, 'order': self.order, 'strata': len(self.values),
                        'witnesses': len(self.witnesses), 'verdict': self.verdict})
        return records


def h_coefficients(p, order):
    # coefficients of h^k in p(e^h): sum over terms a_e e^k / k!
    return [sum((Fraction(c * e ** k, math.factorial(k)) for e, c in p.items()), Fraction(0))
            for k in range(order + 1)]


@lru_cache(maxsize=BRACKET_CACHE_SIZE)
def state_sum(crossings, loops):
    """
    Returns sum over states of (-1)^|s| q^|s| (q + 1/q)^circles(s) for the
    crossing tuples of a validated diagram plus its free loops.
    """
    powers = {}
    total = LaurentPoly.zero()
    for state in product((0, 1), repeat=len(crossings)):
        circles = len(resolution_circles(crossings, state)) + loops
        if circles not in powers:
            powers[circles] = UNKNOT_FACTOR ** circles
        ones = sum(state)
        total = total + powers[circles].shift(ones) * (-1) ** ones
    return total


class PolynomialAPI:
    """
    Mixin polynomial API class: the decategorified state-sum oracle and the
    Vassiliev skein extension.

    Methods
    -------
    kauffman_bracket(d)
        returns LaurentPoly, the raw state sum
    jones_unnormalized(d)
        returns LaurentPoly
    vassiliev_extend(inv, s, order)
        returns Fraction
    skein_polynomial(fn, s, weight)
        returns LaurentPoly
    h_expansion(p, order)
        returns list of Fraction
    jones_coefficient_invariant(k, subtract_unknot)
        returns ScalarInvariant
    singular_corpus(diagrams, double_points, include_switches)
        returns list of SingularDiagram
    order_test(inv, n, corpus)
        returns OrderReport
    """

    def kauffman_bracket(self, d):
        """
        The method computes sum over states of (-1)^|s| q^|s| (q + 1/q)^circles(s).
        It reads circle counts straight from the resolutions and never builds a
        complex, so it serves as the oracle for the Euler characteristic.

        Parameters
        ----------
        d : KnotDiagram, obligatory

        Returns
        ------
        LaurentPoly
        """
        return state_sum(d.crossings, d.loops)

    def jones_unnormalized(self, d):
        bracket = self.kauffman_bracket(d)
        return bracket.shift(d.n_plus - 2 * d.n_minus) * (-1) ** d.n_minus

    def vassiliev_extend(self, inv, s, order=None):
        """
        The method extends a scalar invariant to a singular diagram by the skein
        relation inv(double) = inv(positive) - inv(negative), resolving the double
        points recursively in the given order.

        Parameters
        ----------
        inv : ScalarInvariant, obligatory
        s : SingularDiagram, obligatory
        order : sequence, optional
            permutation of range(codimension), default is the natural order

        Returns
        ------
        Fraction
            exact value of the extension
        """
        m = s.codimension
        order = tuple(range(m)) if order is None else tuple(order)
        if sorted(order) != list(range(m)):
            raise CorpusError(f"resolution order {order} is not a permutation of {m} double points")

        def extend(vector, remaining):
            if not remaining:
                return Fraction(inv.evaluate(s.resolution(tuple(vector))))
            r, rest = remaining[0], remaining[1:]
            positive, negative = list(vector), list(vector)
            negative[r] = 1
            return extend(positive, rest) - extend(negative, rest)

        return extend([0] * m, order)

    def skein_polynomial(self, fn, s, weight=None):
        """
        The method computes sum over resolution vectors v of
        (-1)^|v| weight^|v| fn(K_v) for a polynomial-valued fn.

        Returns
        ------
        LaurentPoly
        """
        weight = LaurentPoly.one() if weight is None else weight
        total = LaurentPoly.zero()
        for vector in product((0, 1), repeat=s.codimension):
            u = sum(vector)
            total = total + fn(s.resolution(vector)) * (weight ** u) * (-1) ** u
        return total

    def h_expansion(self, p, order):
        """
        The method returns the coefficients c_0..c_order of h^k in p(e^h).

        Raises
        ------
        ExpansionGuardError
            if the order is negative or exceeds H_EXPANSION_MAX_ORDER
        """
        guard = self.KH_CONFIG.get_h_expansion_max_order()
        if not 0 <= order <= guard:
            logger_global.error(f"h-expansion order {order} outside 0..{guard}")
            raise ExpansionGuardError(f"h-expansion order {order} outside 0..{guard}")
        return h_coefficients(p, order)

    def jones_coefficient_invariant(self, k, subtract_unknot=False):
        offset = h_coefficients(UNKNOT_FACTOR, k)[k] if subtract_unknot else Fraction(0)

        def evaluate(d):
            return self.h_expansion(self.jones_unnormalized(d), k)[k] - offset

        return ScalarInvariant(f"c{k}" + ("-unknot" if subtract_unknot else ""), evaluate)

    def singular_corpus(self, diagrams, double_points, include_switches=True):
        """
        The method builds singular diagrams with a fixed number of double points
        from single-component diagrams and, optionally, their single crossing
        switches. Strata differing only in the over/under data of the doubled
        crossings are listed once.

        Returns
        ------
        list
            SingularDiagram
        """
        corpus, seen = [], set()
        for d in diagrams:
            if not d.is_knot:
                continue
            bases = [d]
            if include_switches:
                bases += [self.switch_crossing(d, k) for k in range(d.crossing_count)]
            for base in bases:
                for ks in combinations(range(base.crossing_count), double_points):
                    stratum = self.mark_singular(base, ks)
                    key = (stratum.resolution((0,) * double_points), ks)
                    if key not in seen:
                        seen.add(key)
                        corpus.append(stratum)
        logger_global.info(f"Singular corpus with {double_points} double point(s): {len(corpus)} strata.")
        return corpus

    def order_test(self, inv, n, corpus):
        """
        The method evaluates the extension of a scalar invariant on a corpus of
        (n+1)-singular diagrams. All values zero is consistent with type <= n;
        it is evidence, not a proof.

        Raises
        ------
        CorpusError
            if a corpus element has the wrong number of double points

        Returns
        ------
        OrderReport
        """
        for s in corpus:
            if s.codimension != n + 1:
                raise CorpusError(f"stratum {s.stratum_id} has {s.codimension} double points, expected {n + 1}")
        values = []
        for s in tqdm(corpus, desc=f"order test {inv.name}, n={n}", disable=len(corpus) < 50):
            values.append((s.stratum_id, self.vassiliev_extend(inv, s)))
        witnesses = tuple((stratum, value) for stratum, value in values if value != 0)
        if witnesses:
            verdict = f"not of type <= {n}: {len(witnesses)} nonzero value(s)"
        else:
            verdict = f"consistent with type <= {n}"
        logger_global.info(f"Order test of {inv.name} at n={n} over {len(values)} strata: {verdict}")
        return OrderReport(inv.name, n, tuple(values), witnesses, verdict)
