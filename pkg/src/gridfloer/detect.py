"""Decision procedures driven by link Floer ranks.

Every verdict here is read off from computed ranks, linking numbers or
the module action; nothing is assumed about the link beyond its grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional

from .action import homology_action, is_free_module
from .complex import MultigradedRanks, link_floer_ranks
from .errors import InvalidComponent, LastComponent
from .grid import GridDiagram, linking_matrix, remove_component, sublink, trace_components
from .laurent import LaurentPoly


@dataclass(frozen=True)
class EulerCharacteristic:
    chi: LaurentPoly
    alexander: LaurentPoly


def euler_and_alexander(r: MultigradedRanks) -> EulerCharacteristic:
    """Graded Euler characteristic in ``tau_i`` (``tau_i^2 = t_i``) and the
    Alexander polynomial, normalized up to units."""
    chi = LaurentPoly(
        [(k.alex2, (-1) ** (k.maslov % 2) * v) for k, v in r.entries.items()], r.l
    )
    delta = chi
    if r.l > 1:
        for i in range(r.l):
            delta = delta.divide_by_difference(i)
    return EulerCharacteristic(chi, delta.normalized())


@dataclass(frozen=True)
class Verdict:
    value: bool
    reason: str

    def to_json(self) -> dict:
        return {"value": self.value, "reason": self.reason}


VERDICT_ORDER = (
    "is_unknot",
    "is_unlink",
    "is_hopf_link",
    "is_second_smallest_class",
    "is_split",
    "fibered_top_certificate",
)


@dataclass
class DetectionReport:
    name: Optional[str]
    components: int
    lfr: int
    hat: MultigradedRanks
    verdicts: dict
    alexander: LaurentPoly
    free_pairs: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "components": self.components,
            "lfr": self.lfr,
            "hat": self.hat.to_json(),
            "verdicts": {k: self.verdicts[k].to_json() for k in VERDICT_ORDER},
            "pairs": [
                {"pair": list(p), "free": v} for p, v in sorted(self.free_pairs.items())
            ],
            "alexander": {
                "terms": self.alexander.to_json(),
                "text": self.alexander.to_string(halve=True),
            },
        }


def pair_freeness(g: GridDiagram, max_size: Optional[int] = None) -> dict[tuple[int, int], bool]:
    """Freeness of the action for every unordered component pair."""
    l = trace_components(g).l
    return {
        (a, b): is_free_module(homology_action(g, a, b, max_size=max_size)).free
        for a, b in combinations(range(l), 2)
    }


def _top_rank(r: MultigradedRanks) -> tuple[int, int]:
    totals: dict[int, int] = {}
    for a, v in r.by_alexander().items():
        totals[sum(a)] = totals.get(sum(a), 0) + v
    top = max(totals)
    return top, totals[top]


def detect_all(g: GridDiagram, max_size: Optional[int] = None) -> DetectionReport:
    r = link_floer_ranks(g, max_size)
    l, total = r.l, r.total
    pairs = pair_freeness(g, max_size)
    free = [p for p, v in pairs.items() if v]
    top, top_rank = _top_rank(r)

    v = {}
    v["is_unknot"] = Verdict(
        l == 1 and total == 1,
        f"knot with rank {total}" if l == 1 else f"{l} components",
    )
    unlink_rank = 2 ** (l - 1)
    v["is_unlink"] = Verdict(
        l >= 2 and total == unlink_rank,
        f"rank {total} vs unlink rank {unlink_rank}" if l >= 2 else "a knot, not a link",
    )
    v["is_hopf_link"] = Verdict(
        l == 2 and total == 4,
        f"{l} components with rank {total}; the Hopf link is the only 2-component link of rank 4",
    )
    v["is_second_smallest_class"] = Verdict(
        l >= 2 and total == 2 ** l,
        (
            f"rank {total} vs {2 ** l}: rank-characterized class Hopf link ⊔ {l - 2}-component unlink"
            if l >= 2
            else "a knot, not a link"
        ),
    )
    v["is_split"] = Verdict(
        bool(free),
        f"action free for pair(s) {', '.join(map(str, free))}" if free
        else ("no component pairs" if l == 1 else "action not free for any component pair"),
    )
    v["fibered_top_certificate"] = Verdict(
        top_rank == 1,
        f"total rank {top_rank} at top collapsed Alexander grading {Fraction(top, 2)}",
    )
    return DetectionReport(
        g.name, l, total, r, v, euler_and_alexander(r).alexander, pairs
    )


def is_split(g: GridDiagram, max_size: Optional[int] = None) -> bool:
    return any(pair_freeness(g, max_size).values())


# --- component removal ------------------------------------------------------


def _half(x: int):
    return x // 2 if x % 2 == 0 else x / 2


@dataclass
class AuditReport:
    component: int
    lfr_L: int
    lfr_sub: int
    equality: bool
    linking: list[int]
    shift_vector: list[int]
    link_split: bool
    proposition_applies: bool
    predicted: dict
    observed: dict
    agrees: bool
    trivial_clause: dict
    figure_accounting: list[dict]

    def to_json(self) -> dict:
        return {
            "component": self.component,
            "lfr_L": self.lfr_L,
            "lfr_sub": self.lfr_sub,
            "equality": self.equality,
            "linking": self.linking,
            "shift_vector": self.shift_vector,
            "link_split": self.link_split,
            "proposition_applies": self.proposition_applies,
            "predicted": self.predicted,
            "observed": self.observed,
            "agrees": self.agrees,
            "trivial_clause": self.trivial_clause,
            "figure_accounting": self.figure_accounting,
        }


def figure_accounting(
    r: MultigradedRanks, sub: MultigradedRanks, i: int, shift: list[int]
) -> list[dict]:
    """Dots of ``L`` projected away from component ``i`` and shifted, next to
    the doubled ranks of the sublink that survive in each grading."""
    keep = [j for j in range(r.l) if j != i]
    dots: dict[tuple[int, ...], int] = {}
    for a, v in r.by_alexander().items():
        key = tuple(a[j] + s for j, s in zip(keep, shift))
        dots[key] = dots.get(key, 0) + v
    surviving = {a: 2 * v for a, v in sub.by_alexander().items()}
    rows = []
    for key in sorted(set(dots) | set(surviving)):
        rows.append({
            "grading": [_half(x) for x in key],
            "alex2": list(key),
            "dots": dots.get(key, 0),
            "surviving": surviving.get(key, 0),
        })
    return rows


def removal_audit(g: GridDiagram, i: int, max_size: Optional[int] = None) -> AuditReport:
    part = trace_components(g)
    if not 0 <= i < part.l:
        raise InvalidComponent(f"removal_audit: component {i} does not exist (link has {part.l})")
    if part.l < 2:
        raise LastComponent(f"removal_audit: {g.name or 'grid'} has a single component")
    r = link_floer_ranks(g, max_size)
    sub_g = remove_component(g, i)
    sub = link_floer_ranks(sub_g, max_size)
    equality = r.total == 2 * sub.total
    lk = linking_matrix(g, part)
    others = [j for j in range(part.l) if j != i]
    linking = [lk[i][j] for j in others]
    shift = [-x for x in linking]

    pairs = pair_freeness(g, max_size)
    link_split = any(pairs.values())
    applies = equality and not link_split
    sub_split = sub.l > 1 and is_split(sub_g, max_size)
    observed = {"linking_zero": all(x == 0 for x in linking), "sublink_nonsplit": not sub_split}
    predicted = {"linking_zero": True, "sublink_nonsplit": True} if applies else None
    agrees = predicted == observed if applies else True

    # L_i splits off when its action with every other component is free
    splits_off = all(pairs[tuple(sorted((i, j)))] for j in others) and not any(linking)
    unknotted = link_floer_ranks(sublink(g, [i]), max_size).total == 1
    clause = {
        "applies": splits_off,
        "component_unknotted": unknotted,
        "predicted_equality": unknotted if splits_off else None,
        "agrees": (unknotted == equality) if splits_off else True,
    }
    return AuditReport(
        i, r.total, sub.total, equality, linking, shift, link_split, applies,
        predicted, observed, agrees and clause["agrees"], clause,
        figure_accounting(r, sub, i, shift),
    )


def predict_disjoint_union(r1: MultigradedRanks, r2: MultigradedRanks) -> dict:
    """Hat ranks of a split union: both factors tensored with a copy of F^2
    supported in Maslov gradings 0 and -1."""
    out: dict = {}
    for k1, v1 in r1.entries.items():
        for k2, v2 in r2.entries.items():
            for shift in (0, -1):
                key = (k1.maslov + k2.maslov + shift, k1.alex2 + k2.alex2)
                out[key] = out.get(key, 0) + v1 * v2
    return out
