"""Alignment regularization between template tokens and melody tokens.

Rows index melody tokens (four per note: bar, position, pitch, duration) and
columns index template tokens (tonality, then chord, rhythm, cadence per
note). The target ``w`` is the row-normalized 0/1 alignment and the loss is
the cross-entropy of the attention against it, averaged over all ``K * J``
cells.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSize, NonPositiveAttention, ShapeMismatch

DEFAULT_LAMBDA_ATTN = 0.05

BAR, POS, PITCH, DUR = range(4)
CHORD, RHY, CAD = range(1, 4)


def melody_row(note: int, field: int) -> int:
    return 4 * note + field


def template_col(note: int, element: int) -> int:
    """Column of ``element`` (CHORD, RHY or CAD) for ``note``; tonality is column 0."""
    return 3 * note + element


@dataclass(frozen=True)
class AlignmentMatrix:
    w_hat: np.ndarray  # (K, J) of {0, 1}
    w: np.ndarray  # (K, J), rows sum to 1 or 0

    @property
    def K(self) -> int:
        return self.w.shape[0]

    @property
    def J(self) -> int:
        return self.w.shape[1]

    @classmethod
    def from_mask(cls, w_hat) -> "AlignmentMatrix":
        w_hat = np.asarray(w_hat, dtype=np.int8)
        counts = w_hat.sum(axis=1, keepdims=True).astype(np.float64)
        w = np.divide(w_hat, counts, out=np.zeros(w_hat.shape), where=counts > 0)
        return cls(w_hat, w)


@dataclass(frozen=True)
class LossBreakdown:
    l_nll: float
    l_attn: float
    lambda_attn: float
    total: float


def build_alignment(n_notes: int) -> AlignmentMatrix:
    if n_notes < 1:
        raise InvalidSize(f"need at least one note, got {n_notes}")
    K, J = 4 * n_notes, 1 + 3 * n_notes
    w_hat = np.zeros((K, J), dtype=np.int8)
    for i in range(n_notes):
        pitch = melody_row(i, PITCH)
        cad = template_col(i, CAD)
        w_hat[pitch, 0] = 1  # tonality
        w_hat[pitch, template_col(i, CHORD)] = 1
        w_hat[melody_row(i, POS), template_col(i, RHY)] = 1
        w_hat[melody_row(i, DUR), cad] = 1
        w_hat[pitch, cad] = 1
        if i + 1 < n_notes:
            w_hat[melody_row(i + 1, BAR), cad] = 1
            w_hat[melody_row(i + 1, POS), cad] = 1
    return AlignmentMatrix.from_mask(w_hat)


def _check_shape(align: AlignmentMatrix, mat: np.ndarray) -> None:
    if mat.shape != align.w.shape:
        raise ShapeMismatch(f"matrix shape {mat.shape} != alignment shape {align.w.shape}")


def attn_loss(align: AlignmentMatrix, A) -> float:
    A = np.asarray(A, dtype=np.float64)
    _check_shape(align, A)
    mask = align.w > 0
    if np.any(A[mask] <= 0):
        raise NonPositiveAttention("attention must be positive wherever w > 0")
    K, J = align.w.shape
    return float(-(align.w[mask] * np.log(A[mask])).sum() / (K * J))


def row_softmax(logits) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def attn_loss_from_logits(align: AlignmentMatrix, logits) -> float:
    return attn_loss(align, row_softmax(logits))


def attn_loss_grad(align: AlignmentMatrix, logits) -> np.ndarray:
    """Gradient of the alignment loss with respect to pre-softmax logits."""
    logits = np.asarray(logits, dtype=np.float64)
    _check_shape(align, logits)
    A = row_softmax(logits)
    K, J = align.w.shape
    return (align.w.sum(axis=1, keepdims=True) * A - align.w) / (K * J)


def total_loss(l_nll: float, align: AlignmentMatrix, A,
               lambda_attn: float = DEFAULT_LAMBDA_ATTN) -> LossBreakdown:
    if lambda_attn < 0:
        raise ValueError("lambda_attn must be nonnegative")
    l_attn = attn_loss(align, A)
    return LossBreakdown(float(l_nll), l_attn, float(lambda_attn),
                         float(l_nll) + lambda_attn * l_attn)


def alignment_to_json(align: AlignmentMatrix, lambda_attn: float = DEFAULT_LAMBDA_ATTN) -> dict:
    n = align.K // 4
    return {
        "n_notes": n,
        "K": align.K,
        "J": align.J,
        "lambda_attn": lambda_attn,
        "rows": [f"{kind}_{i}" for i in range(n) for kind in ("bar", "pos", "pitch", "dur")],
        "cols": ["ton"] + [f"{kind}_{i}" for i in range(n) for kind in ("chord", "rhy", "cad")],
        "w_hat": align.w_hat.astype(int).tolist(),
        "w": align.w.tolist(),
    }


def dump_matrix(mat: np.ndarray, fmt: str = "{:.6f}") -> str:
    """Plain text, one row per line, space separated; used by golden files."""
    return "\n".join(" ".join(fmt.format(v) for v in row) for row in np.asarray(mat)) + "\n"
