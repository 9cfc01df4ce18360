"""Decorrelated, sparse topic model over developer identifier documents.

Plain PLSA EM on fractional (TF-IDF) counts, with additive regularization in
the M-step: a uniform negative smoothing offset drives sparsity, and an
inter-topic decorrelation term pushes term-topic columns apart.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)

__all__ = ["TopicParams", "TopicModel", "fit_topics", "top_terms", "main_topic"]


@dataclass(frozen=True)
class TopicParams:
    n_topics: int = 10
    tau_decor: float | None = None  # None: 0.1 * corpus mass / vocabulary size
    beta_phi: float = -0.01
    alpha_theta: float = -0.01
    max_iters: int = 200
    tol: float = 1e-6
    seed: int = 0
    normalize_docs: bool = False

    def __post_init__(self) -> None:
        if self.n_topics < 1:
            raise ValueError("n_topics must be >= 1")
        if self.tau_decor is not None and self.tau_decor < 0:
            raise ValueError("tau_decor must be >= 0")
        if self.beta_phi > 0:
            raise ValueError("beta_phi must be <= 0")
        if self.alpha_theta > 0:
            raise ValueError("alpha_theta must be <= 0")


@dataclass
class TopicModel:
    """Column-stochastic term-topic (phi) and topic-document (theta) factors."""

    vocabulary: list[str]
    doc_ids: list[int]
    phi: np.ndarray  # |V| x T
    theta: np.ndarray  # T x |D|
    log_likelihood: float
    iterations: int
    trace: list[float]
    tau_decor: float
    params: TopicParams
    collapsed_topics: list[int] = field(default_factory=list)

    @property
    def n_topics(self) -> int:
        return self.phi.shape[1]


def _log_likelihood(
    docs: list[tuple[np.ndarray, np.ndarray]], phi: np.ndarray, theta: np.ndarray
) -> float:
    ll = 0.0
    for d, (idx, counts) in enumerate(docs):
        p = phi[idx] @ theta[:, d]
        ll += float(counts @ np.log(np.maximum(p, 1e-300)))
    return ll


def fit_topics(docs: Mapping[int, Mapping[str, float]], params: TopicParams) -> TopicModel:
    """EM fit; raises ValueError on an empty corpus."""
    items = [(ident, doc) for ident, doc in sorted(docs.items()) if any(w > 0 for w in doc.values())]
    if not items:
        raise ValueError("all documents are empty; nothing to fit")
    doc_ids = [ident for ident, _ in items]
    vocab = sorted({term for _, doc in items for term in doc if doc[term] > 0})
    v_size, t_size, d_size = len(vocab), params.n_topics, len(items)
    if v_size < t_size:
        log.warning("vocabulary size %d below topic count %d", v_size, t_size)
    term_index = {t: i for i, t in enumerate(vocab)}

    packed: list[tuple[np.ndarray, np.ndarray]] = []
    for _, doc in items:
        idx = np.array([term_index[t] for t in sorted(doc) if doc[t] > 0], dtype=int)
        counts = np.array([doc[t] for t in sorted(doc) if doc[t] > 0], dtype=float)
        if params.normalize_docs:
            counts = counts / counts.sum()
        packed.append((idx, counts))
    # accumulate in content order, so relabeling document ids permutes theta
    # columns without perturbing phi even at the bitwise level
    accum_order = sorted(
        range(d_size), key=lambda d: (packed[d][0].tolist(), packed[d][1].tolist())
    )

    mass = float(sum(c.sum() for _, c in packed))
    tau = params.tau_decor if params.tau_decor is not None else 0.1 * mass / v_size

    rng = np.random.default_rng(params.seed)
    phi = rng.dirichlet(np.ones(v_size), size=t_size).T  # V x T, columns stochastic
    theta = np.full((t_size, d_size), 1.0 / t_size)

    rescued: set[int] = set()
    collapsed: list[int] = []
    trace = [_log_likelihood(packed, phi, theta)]
    iterations = 0
    for iteration in range(1, params.max_iters + 1):
        iterations = iteration
        n_wt = np.zeros((v_size, t_size))
        n_td = np.zeros((t_size, d_size))
        for d in accum_order:
            idx, counts = packed[d]
            scores = phi[idx] * theta[:, d]  # n_d x T
            z = scores.sum(axis=1)
            np.maximum(z, 1e-300, out=z)
            resp = scores / z[:, None]
            contrib = resp * counts[:, None]
            np.add.at(n_wt, idx, contrib)
            n_td[:, d] = contrib.sum(axis=0)

        row_sum = phi.sum(axis=1)
        phi_new = np.maximum(0.0, n_wt + params.beta_phi - tau * phi * (row_sum[:, None] - phi))
        col = phi_new.sum(axis=0)
        for t in np.flatnonzero(col == 0):
            if t in rescued:
                if t not in collapsed:
                    collapsed.append(int(t))
                continue
            rescued.add(int(t))
            corpus = n_wt.sum(axis=1)
            explained = phi_new.sum(axis=1)
            residual = np.maximum(0.0, corpus / max(corpus.sum(), 1e-300) - explained / max(explained.sum(), 1e-300))
            if residual.sum() <= 0:
                residual = np.ones(v_size)
            phi_new[:, t] = residual / residual.sum()
            col[t] = 1.0
        safe = np.where(col > 0, col, 1.0)
        phi = phi_new / safe

        theta_new = np.maximum(0.0, n_td + params.alpha_theta)
        tcol = theta_new.sum(axis=0)
        dead = tcol == 0
        if dead.any():
            theta_new[:, dead] = 1.0 / t_size
            tcol = theta_new.sum(axis=0)
        theta = theta_new / tcol

        trace.append(_log_likelihood(packed, phi, theta))
        prev, cur = trace[-2], trace[-1]
        if abs(cur - prev) <= params.tol * max(abs(prev), 1e-12):
            break

    return TopicModel(
        vocabulary=vocab,
        doc_ids=doc_ids,
        phi=phi,
        theta=theta,
        log_likelihood=trace[-1],
        iterations=iterations,
        trace=trace,
        tau_decor=tau,
        params=params,
        collapsed_topics=collapsed,
    )


def top_terms(model: TopicModel, topic: int, n: int = 10) -> list[tuple[str, float]]:
    """Terms ranked by phi * ln(phi / mean-over-topics): likely AND specific.

    Zero-probability terms are excluded; ties break lexicographically.
    """
    if not 0 <= topic < model.n_topics:
        raise ValueError(f"topic {topic} out of range")
    col = model.phi[:, topic]
    mean = model.phi.mean(axis=1)
    scored = [
        (float(col[w] * np.log(col[w] / mean[w])), model.vocabulary[w])
        for w in np.flatnonzero(col > 0)
    ]
    scored.sort(key=lambda s: (-s[0], s[1]))
    return [(term, score) for score, term in scored[:n]]


def main_topic(model: TopicModel, identity: int) -> int:
    """Argmax topic of an identity's theta column; ties go to the lower index."""
    try:
        d = model.doc_ids.index(identity)
    except ValueError:
        raise KeyError(f"identity {identity} has no document") from None
    return int(model.theta[:, d].argmax())
