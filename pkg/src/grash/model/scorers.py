"""Scoring functions with analytic gradients.

All scorers work on real arrays whose last axis holds one embedding.
Complex-valued scorers read that axis as interleaved (re, im) pairs.
Inputs broadcast against each other over the leading axes; gradients are
returned at the broadcast shape and reduced by the caller.
"""

from abc import ABC, abstractmethod

import numpy as np

from ..errors import ModelConfigError

EPS = 1e-12


def to_complex(x: np.ndarray) -> np.ndarray:
    return x[..., 0::2] + 1j * x[..., 1::2]


def from_complex(z: np.ndarray) -> np.ndarray:
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],), dtype=np.float64)
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def reduce_to_shape(grad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    """Sum a broadcast gradient back to an input's shape."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Scorer(ABC):
    """A triple scoring function f(e_s, e_p, e_o)."""

    name: str = ""
    complex_valued: bool = False

    def relation_width(self, dim: int) -> int:
        return dim

    def init_relations(
        self, rng: np.random.Generator, n_relations: int, dim: int, init_scale: float
    ) -> np.ndarray:
        return rng.uniform(-init_scale, init_scale, size=(n_relations, dim))

    @abstractmethod
    def forward(self, s: np.ndarray, p: np.ndarray, o: np.ndarray) -> np.ndarray:
        """Scores over the broadcast leading axes."""

    @abstractmethod
    def backward(
        self, s: np.ndarray, p: np.ndarray, o: np.ndarray, upstream: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Gradients of ``sum(upstream * forward(s, p, o))`` w.r.t. s, p and o."""

    def candidates(
        self, first: np.ndarray, relation: np.ndarray, entities: np.ndarray, replace_object: bool
    ) -> np.ndarray:
        """Score Q queries against every entity.

        Args:
            first: (Q, d) the fixed entity (subject or object)
            relation: (Q, w) relation embeddings
            entities: (n, d) candidate embeddings
            replace_object: True for (s, p, ?) queries

        Returns:
            (Q, n) scores
        """
        fixed = first[:, None, :]
        rel = relation[:, None, :]
        cand = entities[None, :, :]
        if replace_object:
            return self.forward(fixed, rel, cand)
        return self.forward(cand, rel, fixed)


class TransEScorer(Scorer):
    """-||s + p - o|| with an L1 or L2 norm."""

    name = "transe"

    def __init__(self, p_norm: int = 2):
        if p_norm not in (1, 2):
            raise ModelConfigError(f"TransE norm must be 1 or 2, got {p_norm}")
        self.p_norm = p_norm

    def forward(self, s, p, o):
        diff = s + p - o
        if self.p_norm == 1:
            return -np.abs(diff).sum(axis=-1)
        return -np.sqrt((diff * diff).sum(axis=-1))

    def backward(self, s, p, o, upstream):
        diff = s + p - o
        if self.p_norm == 1:
            grad = -np.sign(diff)
        else:
            norm = np.sqrt((diff * diff).sum(axis=-1, keepdims=True))
            grad = -diff / np.maximum(norm, EPS)
        grad = grad * upstream[..., None]
        return grad, grad, -grad


class ComplExScorer(Scorer):
    """Re(<s, p, conj(o)>)."""

    name = "complex"
    complex_valued = True

    def forward(self, s, p, o):
        return (to_complex(s) * to_complex(p) * np.conj(to_complex(o))).real.sum(axis=-1)

    def backward(self, s, p, o, upstream):
        zs, zp, zo = to_complex(s), to_complex(p), to_complex(o)
        g = upstream[..., None]
        return (
            from_complex(np.conj(zp) * zo * g),
            from_complex(np.conj(zs) * zo * g),
            from_complex(zs * zp * g),
        )

    def candidates(self, first, relation, entities, replace_object):
        # trilinear form collapses to one matrix product per direction
        zf, zp, ze = to_complex(first), to_complex(relation), to_complex(entities)
        if replace_object:
            return ((zf * zp) @ np.conj(ze).T).real
        return ((zp * np.conj(zf)) @ ze.T).real


class RotatEScorer(Scorer):
    """-||s * e^{i theta} - o|| with relations stored as phases."""

    name = "rotate"
    complex_valued = True

    def relation_width(self, dim: int) -> int:
        return dim // 2

    def init_relations(self, rng, n_relations, dim, init_scale):
        return rng.uniform(0.0, 2.0 * np.pi, size=(n_relations, dim // 2))

    def forward(self, s, p, o):
        diff = to_complex(s) * np.exp(1j * p) - to_complex(o)
        return -np.sqrt((diff.real**2 + diff.imag**2).sum(axis=-1))

    def backward(self, s, p, o, upstream):
        rotation = np.exp(1j * p)
        rotated = to_complex(s) * rotation
        diff = rotated - to_complex(o)
        norm = np.sqrt((diff.real**2 + diff.imag**2).sum(axis=-1, keepdims=True))
        g = -diff / np.maximum(norm, EPS) * upstream[..., None]
        return (
            from_complex(g * np.conj(rotation)),
            -(np.conj(g) * rotated).imag,
            from_complex(-g),
        )


SCORERS = ("complex", "transe", "rotate")


def make_scorer(name: str, p_norm: int = 2) -> Scorer:
    """Look up a scorer by name."""
    if name == "complex":
        return ComplExScorer()
    if name == "transe":
        return TransEScorer(p_norm)
    if name == "rotate":
        return RotatEScorer()
    raise ModelConfigError(f"Unknown scorer '{name}'; expected one of {', '.join(SCORERS)}")
