"""Transfer-operator counting of perfect matchings on barrel graphs.

Matchings are sliced along the cylinder by their horizontal profile
(S_0, .., S_{k+1}), S_j the set of matched slots in horizontal layer j.
Between consecutive layers sits one big cycle C_{2m}; once the horizontal
edges are fixed, the cycle must perfectly match its remaining vertices.
With the canonical labeling the layer on the left attaches at the even
positions {2l} and the layer on the right at the odd positions {2l+1},
so the number of completions is

    entry(S, T) = #PM( C_{2m} - {2l : l in S} - {2l+1 : l in T} ).

The total count factorizes through the operator A with these entries:

    Phi(F(m, k)) = <omega| A^(k+1) |omega>,

where omega_S = #PM(C_m - S) counts cap completions.  Entries vanish
unless |S| = |T| and the deleted evens and odds interlace around the
cycle; surviving entries equal 1 except entry(0, 0) = 2, and carry a
monomial b^i c^j when cycle edges (2i, 2i+1) are weighted b ("up") and
(2i+1, 2i+2) weighted c ("down").  For the singleton blocks this gives
the row action

    B|l> = sum_{l' <= l} c^(l-l') b^(m-1+l'-l) |l'>
         + sum_{l' > l}  b^(l'-l-1) c^(m+l-l') |l'>,

which pins down the orientation conventions used everywhere else.

Subsets of I_m = {0, .., m-1} are encoded as bitmasks (bit l set iff
l in S); all counting is exact big-integer arithmetic.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    InvalidParamsError,
    SectorError,
    TooLargeError,
    UnsupportedParameterError,
)
from .graph import BarrelGraph, BarrelParams, Matching, build_graph

TRANSFER_M_CAP = 16


# ---------------------------------------------------------------------------
# subset encoding
# ---------------------------------------------------------------------------

def as_mask(m: int, subset: int | Iterable[int]) -> int:
    """Coerce an iterable of elements of I_m (or a ready mask) to a bitmask."""
    if isinstance(subset, int):
        if subset < 0 or subset >> m:
            raise InvalidParamsError(f"mask {subset} out of range for m={m}")
        return subset
    mask = 0
    for l in subset:
        if not 0 <= l < m:
            raise InvalidParamsError(f"element {l} outside I_{m}")
        if mask >> l & 1:
            raise InvalidParamsError(f"repeated element {l}")
        mask |= 1 << l
    return mask


def mask_elements(mask: int) -> tuple[int, ...]:
    out = []
    l = 0
    while mask:
        if mask & 1:
            out.append(l)
        mask >>= 1
        l += 1
    return tuple(out)


@dataclass(frozen=True)
class WeightMonomial:
    """Single matching weight b^b_exp * c^c_exp."""

    b_exp: int
    c_exp: int

    def evaluate(self, b: float, c: float) -> float:
        return b**self.b_exp * c**self.c_exp

    def __str__(self) -> str:
        return f"b^{self.b_exp}c^{self.c_exp}"


# ---------------------------------------------------------------------------
# per-entry primitives (arc decomposition of the punctured cycle)
# ---------------------------------------------------------------------------

def _punctured_even_cycle_monomials(m: int, removed: Sequence[int]) -> tuple[WeightMonomial, ...]:
    """Matchings of C_{2m} minus `removed` (sorted positions), one monomial each.

    Edge (x, x+1) weighs b when x is even, c when x is odd.  The removed
    vertices cut the cycle into arcs; each even-length arc has exactly one
    perfect matching, all of whose edges start on the same parity.
    """
    n = 2 * m
    if not removed:
        return (WeightMonomial(m, 0), WeightMonomial(0, m))
    b_exp = c_exp = 0
    for a, r in enumerate(removed):
        r_next = removed[(a + 1) % len(removed)]
        length = (r_next - r - 1) % n
        if length % 2:
            return ()
        start = (r + 1) % n
        if start % 2 == 0:
            b_exp += length // 2
        else:
            c_exp += length // 2
    return (WeightMonomial(b_exp, c_exp),)


def weighted_block_entry(m: int, S: int | Iterable[int], T: int | Iterable[int]) -> tuple[WeightMonomial, ...]:
    """Weighted entry: monomials of the matchings of the doubly punctured cycle.

    Single monomial of total degree m - |S| when nonzero; the (0, 0)
    entry alone is the binomial b^m + c^m.
    """
    if m < 1:
        raise InvalidParamsError(f"m must be >= 1, got {m}")
    s_mask = as_mask(m, S)
    t_mask = as_mask(m, T)
    removed = sorted([2 * l for l in mask_elements(s_mask)]
                     + [2 * l + 1 for l in mask_elements(t_mask)])
    return _punctured_even_cycle_monomials(m, removed)


def cycle_block_entry(m: int, S: int | Iterable[int], T: int | Iterable[int]) -> int:
    """Unweighted entry: number of perfect matchings of the punctured C_{2m}."""
    return len(weighted_block_entry(m, S, T))


def boundary_vector(m: int) -> dict[int, int]:
    """Cap vector omega_S = #PM(C_m - S), returned sparsely (nonzero only).

    omega at the empty set is 2 exactly when m is even; omega at I_m is 1;
    all other values are 0 or 1 by the arc-parity rule.
    """
    if m < 3:
        raise InvalidParamsError(f"m must be >= 3, got {m}")
    omega: dict[int, int] = {}
    if m % 2 == 0:
        omega[0] = 2
    for mask in range(1, 1 << m):
        removed = mask_elements(mask)
        ok = True
        for a, r in enumerate(removed):
            r_next = removed[(a + 1) % len(removed)]
            if (r_next - r - 1) % m % 2:
                ok = False
                break
        if ok:
            omega[mask] = 1
    return omega


# ---------------------------------------------------------------------------
# rows of the operator, generated constructively from the interlacing rule
# ---------------------------------------------------------------------------

def _row_monomials(m: int, s_mask: int) -> tuple[tuple[int, WeightMonomial], ...]:
    """All (T, weight) with entry(S, T) != 0, built without scanning 2^m masks.

    For S != 0 a compatible T removes exactly one odd position strictly
    inside each cyclic gap between consecutive removed evens; the choice
    at offset d in a gap of length g contributes c^d b^(g-1-d).
    """
    if s_mask == 0:
        return ((0, WeightMonomial(0, 0)),)  # caller special-cases the (0,0) binomial
    evens = mask_elements(s_mask)
    p = len(evens)
    gaps = [(evens[(a + 1) % p] - evens[a]) % m or m for a in range(p)]
    out: list[tuple[int, WeightMonomial]] = []
    for choice in itertools.product(*(range(g) for g in gaps)):
        t_mask = 0
        b_exp = c_exp = 0
        for a, d in enumerate(choice):
            t_mask |= 1 << ((evens[a] + d) % m)
            c_exp += d
            b_exp += gaps[a] - 1 - d
        out.append((t_mask, WeightMonomial(b_exp, c_exp)))
    out.sort(key=lambda pair: pair[0])
    return tuple(out)


@lru_cache(maxsize=None)
def _count_rows(m: int, parity_only: bool) -> tuple[tuple[int, tuple[tuple[int, int], ...]], ...]:
    """Sparse integer rows ((S, ((T, count), ...)), ...) sorted by mask."""
    rows = []
    for s_mask in range(1 << m):
        if parity_only and bin(s_mask).count("1") % 2 != m % 2:
            continue
        if s_mask == 0:
            rows.append((0, ((0, 2),)))
        else:
            targets = tuple((t, 1) for t, _ in _row_monomials(m, s_mask))
            rows.append((s_mask, targets))
    return tuple(rows)


@lru_cache(maxsize=None)
def _monomial_rows(m: int) -> tuple[tuple[int, tuple[tuple[int, tuple[WeightMonomial, ...]], ...]], ...]:
    rows = []
    for s_mask in range(1 << m):
        if s_mask == 0:
            rows.append((0, ((0, (WeightMonomial(m, 0), WeightMonomial(0, m))),)))
        else:
            targets = tuple((t, (mono,)) for t, mono in _row_monomials(m, s_mask))
            rows.append((s_mask, targets))
    return tuple(rows)


@dataclass(frozen=True)
class TransferOperator:
    """Sparse layer-transition operator on subset space.

    mode "count" holds exact integers, "monomial" symbolic weights, and
    "numeric" floats evaluated at fixed (b, c).  apply() computes
    x -> A x with (A x)_S = sum_T entry(S, T) x_T.
    """

    m: int
    mode: str
    b: float | None
    c: float | None
    rows: tuple[tuple[int, tuple[tuple[int, object], ...]], ...]

    def row(self, S: int | Iterable[int]):
        s_mask = as_mask(self.m, S)
        for mask, targets in self.rows:
            if mask == s_mask:
                return targets
        return ()

    def entry(self, S: int | Iterable[int], T: int | Iterable[int]):
        t_mask = as_mask(self.m, T)
        for mask, w in self.row(S):
            if mask == t_mask:
                return w
        return 0 if self.mode != "monomial" else ()

    def apply(self, vec: dict[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for s_mask, targets in self.rows:
            acc = 0
            for t_mask, w in targets:
                x = vec.get(t_mask)
                if x:
                    acc += w * x
            if acc:
                out[s_mask] = acc
        return out

    def block_masks(self, p: int) -> tuple[int, ...]:
        """Masks of cardinality p, ascending (= colex order on subsets)."""
        return tuple(mask for mask in range(1 << self.m) if bin(mask).count("1") == p)

    def dump(self) -> str:
        """Debug listing: one line per nonzero entry, subsets as bit strings."""
        lines = []
        for s_mask, targets in self.rows:
            s_bits = format(s_mask, f"0{self.m}b")[::-1]
            for t_mask, w in targets:
                t_bits = format(t_mask, f"0{self.m}b")[::-1]
                if self.mode == "monomial":
                    w_str = "+".join(str(mono) for mono in w)
                else:
                    w_str = str(w)
                lines.append(f"{s_bits} {t_bits} {w_str}")
        return "\n".join(lines) + "\n"


def build_transfer(m: int, mode: str = "count", *, b: float = 1.0, c: float = 1.0,
                   parity_only: bool = False, m_cap: int = TRANSFER_M_CAP) -> TransferOperator:
    """Materialize the operator's sparse rows for one barrel width."""
    if m < 3:
        raise InvalidParamsError(f"m must be >= 3, got {m}")
    if m > m_cap:
        raise TooLargeError(f"m={m} exceeds transfer cap {m_cap} (2^m states)")
    if mode == "count":
        return TransferOperator(m, "count", None, None, _count_rows(m, parity_only))
    if mode == "monomial":
        rows = _monomial_rows(m)
        if parity_only:
            rows = tuple(r for r in rows if bin(r[0]).count("1") % 2 == m % 2)
        return TransferOperator(m, "monomial", None, None, rows)
    if mode == "numeric":
        num_rows = []
        for s_mask, targets in _monomial_rows(m):
            if parity_only and bin(s_mask).count("1") % 2 != m % 2:
                continue
            num_rows.append((s_mask, tuple(
                (t, sum(mono.evaluate(b, c) for mono in monos)) for t, monos in targets)))
        return TransferOperator(m, "numeric", b, c, tuple(num_rows))
    raise InvalidParamsError(f"unknown transfer mode {mode!r}")


# ---------------------------------------------------------------------------
# exact counts
# ---------------------------------------------------------------------------

def count_matchings_transfer(m: int, k: int, *, m_cap: int = TRANSFER_M_CAP) -> int:
    """Phi(F(m, k)) = <omega| A^(k+1) |omega>, exact."""
    BarrelParams(m, k)  # validate
    if m > m_cap:
        raise TooLargeError(f"m={m} exceeds transfer cap {m_cap}")
    rows = _count_rows(m, True)
    omega = boundary_vector(m)
    vec = dict(omega)
    for _ in range(k + 1):
        vec = _apply_rows(rows, vec)
    return sum(w * vec.get(s_mask, 0) for s_mask, w in omega.items())


def _apply_rows(rows, vec: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for s_mask, targets in rows:
        acc = 0
        for t_mask, w in targets:
            x = vec.get(t_mask)
            if x:
                acc += w * x
        if acc:
            out[s_mask] = acc
    return out


def sector_count(m: int, k: int, p: int, *, m_cap: int = TRANSFER_M_CAP) -> int:
    """Contribution to Phi(F(m, k)) from profiles of fixed cardinality p.

    The operator preserves |S|, so Phi is the sum of sector_count over
    p = m mod 2, m mod 2 + 2, .., m.
    """
    BarrelParams(m, k)
    if m > m_cap:
        raise TooLargeError(f"m={m} exceeds transfer cap {m_cap}")
    if not 0 <= p <= m:
        raise SectorError(f"sector p={p} outside [0, {m}]")
    if p % 2 != m % 2:
        raise SectorError(f"sector p={p} has wrong parity for m={m}")
    rows = _count_rows(m, True)
    omega = boundary_vector(m)
    vec = {s: w for s, w in omega.items() if bin(s).count("1") == p}
    for _ in range(k + 1):
        vec = _apply_rows(rows, vec)
    return sum(w * vec.get(s_mask, 0) for s_mask, w in omega.items()
               if bin(s_mask).count("1") == p)


def closed_form_345(m: int, k: int) -> int:
    """Closed-form Phi(F(m, k)) for m in {3, 4, 5}, all-integer recurrences.

    m=3: 3^(k+2) + 1
    m=4: u_k + 2^(k+3) + 1,  u_0 = 8, u_1 = 24, u_(n+1) = 4 u_n - 2 u_(n-1)
    m=5: 5^(k+2) + 5 v_k + 1, v_0 = 2, v_1 = 5,  v_(n+1) = 5 v_n - 5 v_(n-1)
    """
    BarrelParams(m, k)
    if m == 3:
        return 3 ** (k + 2) + 1
    if m == 4:
        u_prev, u = 8, 24
        if k == 0:
            u = u_prev
        else:
            for _ in range(k - 1):
                u_prev, u = u, 4 * u - 2 * u_prev
        return u + 2 ** (k + 3) + 1
    if m == 5:
        v_prev, v = 2, 5
        if k == 0:
            v = v_prev
        else:
            for _ in range(k - 1):
                v_prev, v = v, 5 * v - 5 * v_prev
        return 5 ** (k + 2) + 5 * v + 1
    raise UnsupportedParameterError(f"closed form only for m in {{3, 4, 5}}, got m={m}")


# ---------------------------------------------------------------------------
# exact uniform sampling
# ---------------------------------------------------------------------------

def _cycle_pairing(n: int, removed: tuple[int, ...], choice: int = 0) -> list[tuple[int, int]]:
    """The adjacent-pair perfect matching of C_n minus `removed` (sorted).

    Unique when `removed` is nonempty (arc rule); for the intact even
    cycle `choice` picks the even-start (0) or odd-start (1) matching.
    Pairs are returned as (x, x+1 mod n).
    """
    if not removed:
        assert n % 2 == 0
        start = 0 if choice == 0 else 1
        return [((start + 2 * t) % n, (start + 2 * t + 1) % n) for t in range(n // 2)]
    pairs: list[tuple[int, int]] = []
    for a, r in enumerate(removed):
        r_next = removed[(a + 1) % len(removed)]
        length = (r_next - r - 1) % n
        assert length % 2 == 0, "arc of odd length has no perfect matching"
        for t in range(length // 2):
            x = (r + 1 + 2 * t) % n
            pairs.append((x, (x + 1) % n))
    return pairs


def _weighted_choice(rng: random.Random, items: list[tuple[int, int]]) -> int:
    """Exact big-integer weighted choice from [(key, weight > 0), ...]."""
    total = sum(w for _, w in items)
    r = rng.randrange(total)
    for key, w in items:
        if r < w:
            return key
        r -= w
    raise AssertionError("unreachable")


class UniformSampler:
    """Exact uniform sampler over perfect matchings of F(m, k).

    Precomputes the suffix weights W_j = A^(k+1-j) omega, then draws the
    profile layer by layer with conditional probabilities proportional to
    exact integer completion counts, finally filling the forced cycle and
    cap matchings (the only free choices are the 2-way alternations at
    empty layers of even m).
    """

    def __init__(self, m: int, k: int, *, m_cap: int = TRANSFER_M_CAP):
        BarrelParams(m, k)
        if m > m_cap:
            raise TooLargeError(f"m={m} exceeds transfer cap {m_cap}")
        self.m, self.k = m, k
        self.graph: BarrelGraph = build_graph(BarrelParams(m, k))
        self._rows = dict(_count_rows(m, True))
        omega_items = sorted(boundary_vector(m).items())
        self._omega = omega_items
        suffix = [dict(omega_items)]
        rows = _count_rows(m, True)
        for _ in range(k + 1):
            suffix.append(_apply_rows(rows, suffix[-1]))
        suffix.reverse()  # suffix[j] = W_j, j = 0 .. k+1
        self._suffix = suffix
        self.total = sum(w * suffix[0].get(s, 0) for s, w in omega_items)

    def draw(self, rng: random.Random) -> Matching:
        m, k = self.m, self.k
        g = self.graph
        w0 = self._suffix[0]
        items = [(s, w * w0[s]) for s, w in self._omega if w0.get(s)]
        profile = [_weighted_choice(rng, items)]
        for j in range(1, k + 2):
            wj = self._suffix[j]
            items = [(t, cnt * wj[t]) for t, cnt in self._rows[profile[-1]] if wj.get(t)]
            profile.append(_weighted_choice(rng, items))

        edges: set[int] = set()
        for j, s_mask in enumerate(profile):
            for l in mask_elements(s_mask):
                edges.add(g.horizontal_ids[(j, l)])
        left = mask_elements(profile[0])
        choice = rng.randrange(2) if not left else 0
        for x, _y in _cycle_pairing(m, left, choice):
            edges.add(g.cap_ids[("L", x)])
        right = mask_elements(profile[-1])
        choice = rng.randrange(2) if not right else 0
        for x, _y in _cycle_pairing(m, right, choice):
            edges.add(g.cap_ids[("R", x)])
        for j in range(1, k + 2):
            removed = tuple(sorted([2 * l for l in mask_elements(profile[j - 1])]
                                   + [2 * l + 1 for l in mask_elements(profile[j])]))
            choice = rng.randrange(2) if not removed else 0
            for x, _y in _cycle_pairing(2 * m, removed, choice):
                edges.add(g.cycle_ids[(j, x)])
        matching = Matching(frozenset(edges))
        assert len(edges) == g.n_vertices // 2
        return matching


@lru_cache(maxsize=8)
def _sampler(m: int, k: int) -> UniformSampler:
    return UniformSampler(m, k)


def sample_uniform(m: int, k: int, seed: int) -> Matching:
    """One exactly-uniform perfect matching of F(m, k), deterministic in seed."""
    return _sampler(m, k).draw(random.Random(seed))
