"""Conjugacy decision, conjugator shortening, and the length experiment.

Two elements are conjugate iff the rotation-and-shuffle closures of their
cyclically reduced cores meet, so comparing canonical cores decides
conjugacy exactly.  The same closure, traversed with conjugator tracking,
produces an explicit conjugator; greedy descent over centralizer
generators of the target then shortens it.  Each factorization move the
gate construction performs is a product of these generators, so the
descent reaches anything that construction reaches.

The experiment harness draws seeded random conjugate pairs, records the
exact minimal conjugator length from the Cayley oracle next to the
pipeline's, and emits a deterministic CSV.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .budget import resolve_budget
from .cayley import min_conjugator
from .domains import big
from .errors import BudgetExceededError, InputError
from .raag import (
    DefiningGraph,
    NormalForm,
    _cyclic_closure,
    _inv_codes,
    _nf_codes,
    cyclic_form,
    join_factors,
    link,
)

__all__ = [
    "are_conjugate",
    "CentralizerGenerators",
    "centralizer_generators",
    "shorten_conjugator",
    "ConjugacyCertificate",
    "find_conjugator",
    "ClfTrial",
    "ClfTable",
    "clf_experiment",
    "random_reduced_word",
    "random_cyclically_reduced",
]


def are_conjugate(a: NormalForm, b: NormalForm, budget=None) -> bool:
    if a.graph != b.graph:
        raise InputError("words come from different defining graphs")
    ca = cyclic_form(a, budget=budget).canonical_core
    cb = cyclic_form(b, budget=budget).canonical_core
    return ca == cb


@dataclass(frozen=True)
class CentralizerGenerators:
    """Conjugated factor and link generators; they all commute with owner."""

    owner: NormalForm
    generators: tuple


def centralizer_generators(b: NormalForm) -> CentralizerGenerators:
    """For b = q . core . q^-1: the q-conjugates of each commuting factor of
    the core and of each generator in the link of its support."""
    if b.is_identity():
        raise InputError("centralizer generators need a nontrivial element")
    graph = b.graph
    cf = cyclic_form(b)
    q = cf.prefix
    gens = []
    bs = big(b)
    for f in bs.factors:
        gens.append(f.conjugated_by(q))
        gens.append((~f).conjugated_by(q))
    from .raag import normal_form

    for s in sorted(link(cf.core.support(), graph), key=graph.index):
        z = normal_form(s, graph)
        gens.append(z.conjugated_by(q))
        gens.append((~z).conjugated_by(q))
    for z in gens:
        assert z * b == b * z
    return CentralizerGenerators(owner=b, generators=tuple(gens))


def shorten_conjugator(a: NormalForm, b: NormalForm, g: NormalForm) -> NormalForm:
    """Greedy descent: left-multiply g by centralizer generators of b while
    that strictly shortens it.  The result still conjugates a to b."""
    if a.conjugated_by(g) != b:
        raise InputError("g does not conjugate a to b")
    if b.is_identity():
        # centralizer is the whole group; the empty conjugator works
        return NormalForm.identity(g.graph)
    gens = centralizer_generators(b).generators
    improved = True
    while improved:
        improved = False
        for z in gens:
            cand = z * g
            if len(cand) < len(g):
                g = cand
                improved = True
                break
    return g


@dataclass(frozen=True)
class ConjugacyCertificate:
    a: NormalForm
    b: NormalForm
    conjugate: bool
    conjugator: Optional[NormalForm]
    valid: bool
    bound_K: Fraction
    bound_C: Fraction
    within_bound: Optional[bool]
    method: str

    def to_json(self) -> dict:
        return {
            "a": str(self.a),
            "b": str(self.b),
            "conjugate": self.conjugate,
            "conjugator": None if self.conjugator is None else str(self.conjugator),
            "conjugator_length": None if self.conjugator is None else len(self.conjugator),
            "valid": self.valid,
            "bound_K": str(self.bound_K),
            "bound_C": str(self.bound_C),
            "within_bound": self.within_bound,
            "method": self.method,
        }


def _rotation_conjugator(core_a: NormalForm, core_b: NormalForm, budget=None) -> NormalForm:
    """r with r . core_a . r^-1 = core_b, from the rotation/shuffle closure."""
    graph = core_a.graph
    adj = graph.adjacency_masks
    closure = _cyclic_closure(core_a.code, adj, budget=budget)
    for word, conj in closure.items():
        if _nf_codes(word, adj) == core_b.code or word == core_b.code:
            return NormalForm(graph, conj)
    raise InputError("cores are not related by rotations and shuffles")


def find_conjugator(
    a: NormalForm,
    b: NormalForm,
    K=2,
    C=0,
    budget=None,
) -> ConjugacyCertificate:
    """Certificate pipeline: rotation path between cores, composed with the
    cyclic prefixes, then shortened; a fallback minimal search runs when the
    pipeline lands outside |g| <= K(|a|+|b|)+C."""
    if a.graph != b.graph:
        raise InputError("words come from different defining graphs")
    K = Fraction(K)
    C = Fraction(C)
    graph = a.graph
    cfa = cyclic_form(a, budget=budget)
    cfb = cyclic_form(b, budget=budget)
    if cfa.canonical_core != cfb.canonical_core:
        return ConjugacyCertificate(
            a=a, b=b, conjugate=False, conjugator=None, valid=False,
            bound_K=K, bound_C=C, within_bound=None, method="not-conjugate",
        )
    r = _rotation_conjugator(cfa.core, cfb.core, budget=budget)
    g0 = (cfb.prefix * r) * ~cfa.prefix
    g = shorten_conjugator(a, b, g0)
    method = "rotation+shorten"
    bound = K * (len(a) + len(b)) + C
    if len(g) > bound:
        radius = int(bound)
        fallback = min_conjugator(a, b, radius + 1, budget=budget)
        if fallback is not None and len(fallback) < len(g):
            g = fallback
            method = "fallback-minimal"
    valid = a.conjugated_by(g) == b
    return ConjugacyCertificate(
        a=a, b=b, conjugate=True, conjugator=g, valid=valid,
        bound_K=K, bound_C=C, within_bound=len(g) <= bound, method=method,
    )


# ---------------------------------------------------------------------------
# Random words and the conjugator-length experiment.

def random_reduced_word(rng: random.Random, graph: DefiningGraph, length: int) -> NormalForm:
    """Uniform letters with immediate-cancellation rejection."""
    letters = []
    n = 2 * len(graph.vertices)
    while len(letters) < length:
        x = rng.randrange(n)
        if letters and x == letters[-1] ^ 1:
            continue
        letters.append(x)
    return NormalForm(graph, tuple(letters))


def random_cyclically_reduced(
    rng: random.Random, graph: DefiningGraph, max_len: int
) -> NormalForm:
    """Nontrivial cyclically reduced element of core length <= max_len."""
    while True:
        length = rng.randint(1, max_len)
        w = random_reduced_word(rng, graph, length)
        core = cyclic_form(w).core
        if not core.is_identity():
            return core


@dataclass(frozen=True)
class ClfTrial:
    trial: int
    a: NormalForm
    b: NormalForm
    twist: NormalForm
    min_conj_len: Optional[int]
    min_conjugator: Optional[NormalForm]
    pipeline_conj_len: Optional[int]
    big_maximal: bool
    skipped: bool = False

    def csv_row(self, seed):
        return [
            str(self.trial),
            str(len(self.a)),
            str(len(self.b)),
            "" if self.min_conj_len is None else str(self.min_conj_len),
            "" if self.pipeline_conj_len is None else str(self.pipeline_conj_len),
            "1" if self.big_maximal else "0",
            str(seed),
        ]


CSV_HEADER = ["trial", "|a|", "|b|", "min_conj_len", "pipeline_conj_len", "big_maximal", "seed"]


@dataclass(frozen=True)
class ClfTable:
    graph: DefiningGraph
    seed: int
    n_samples: int
    max_core_len: int
    max_twist_len: int
    trials: tuple

    def rows(self):
        return [t.csv_row(self.seed) for t in self.trials if not t.skipped]

    def fitted_additive_constant(self, K=2) -> int:
        """Least C0 with min_conj_len <= K(|a|+|b|) + C0 on every trial."""
        worst = 0
        for t in self.trials:
            if t.skipped or t.min_conj_len is None:
                continue
            worst = max(worst, t.min_conj_len - K * (len(t.a) + len(t.b)))
        return worst

    def max_ratio(self) -> float:
        return max(
            (t.min_conj_len / (len(t.a) + len(t.b) + 1))
            for t in self.trials
            if not t.skipped and t.min_conj_len is not None
        )


def clf_experiment(
    graph: DefiningGraph,
    n_samples: int,
    max_core_len: int,
    max_twist_len: int,
    seed: int,
    budget=None,
) -> ClfTable:
    """Seeded conjugate pairs a = alpha, b = t alpha t^-1 with the exact
    minimal conjugator length (Cayley oracle) and the pipeline's length."""
    if n_samples < 0 or max_core_len < 1 or max_twist_len < 0:
        raise InputError("experiment parameters must be positive")
    rng = random.Random(seed)
    cap = resolve_budget(budget)
    trials = []
    for i in range(n_samples):
        alpha = random_cyclically_reduced(rng, graph, max_core_len)
        t_len = rng.randint(0, max_twist_len)
        t = random_reduced_word(rng, graph, t_len)
        a = alpha
        b = a.conjugated_by(t)
        flag = big(b).maximal
        try:
            gmin = min_conjugator(a, b, len(t) + 1, budget=cap)
            cert = find_conjugator(a, b, budget=cap)
            trials.append(
                ClfTrial(
                    trial=i,
                    a=a,
                    b=b,
                    twist=t,
                    min_conj_len=len(gmin),
                    min_conjugator=gmin,
                    pipeline_conj_len=len(cert.conjugator),
                    big_maximal=flag,
                )
            )
        except BudgetExceededError:
            trials.append(
                ClfTrial(
                    trial=i, a=a, b=b, twist=t,
                    min_conj_len=None, min_conjugator=None,
                    pipeline_conj_len=None, big_maximal=flag, skipped=True,
                )
            )
    return ClfTable(
        graph=graph,
        seed=seed,
        n_samples=n_samples,
        max_core_len=max_core_len,
        max_twist_len=max_twist_len,
        trials=tuple(trials),
    )
