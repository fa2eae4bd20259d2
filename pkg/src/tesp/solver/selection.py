"""Contains the adaptive index selection rules.

All draws go through sample_categorical so that runs sharing a seed consume the
random stream identically, whatever path computed the losses.
"""

from __future__ import annotations

import torch

from tesp.errors import ParameterError

from .params import SelectionRule


def sample_categorical(weights: torch.Tensor, generator: torch.Generator) -> int:
    """Draw an index with probability proportional to the non-negative weights."""
    cumulative = torch.cumsum(weights.reshape(-1), dim=0)
    total = cumulative[-1]
    u = torch.rand((), dtype=torch.float64, generator=generator)
    index = int(torch.searchsorted(cumulative, u * total, right=True))
    return min(index, cumulative.numel() - 1)


def uniform_pair(q_s: int, q_v: int, generator: torch.Generator) -> tuple[int, int]:
    flat = sample_categorical(torch.ones(q_s * q_v, dtype=torch.float64), generator)
    return divmod(flat, q_v)


def select_index(
    losses: torch.Tensor,
    rule: SelectionRule,
    base_probs: tuple[torch.Tensor, torch.Tensor],
    theta: float,
    generator: torch.Generator,
) -> tuple[int, int] | None:
    """Pick a sketch pair from the table of sketched losses.

    Args:
        losses: Non-negative q_S x q_V table f_ij(X).
        rule: "MD" takes the largest loss (first in row-major order on ties), "PR"
            samples proportionally to the losses, "CS" samples proportionally within
            the pairs whose loss reaches theta * max + (1 - theta) * E_p[f].
        base_probs: The sets' probabilities (p_S, p_V), defining E_p[f] for "CS".
        theta: Convex combination parameter of "CS".
        generator: Random stream of the run.

    Returns:
        The 0-based pair (i, j), or None when every loss is zero.
    """
    q_s, q_v = losses.shape
    if float(losses.sum()) <= 0.0:
        return None
    if rule == "MD":
        return divmod(int(torch.argmax(losses)), q_v)
    elif rule == "PR":
        return divmod(sample_categorical(losses, generator), q_v)
    elif rule == "CS":
        p_s, p_v = base_probs
        largest = losses.max()
        expected = p_s @ losses @ p_v
        threshold = theta * largest + (1.0 - theta) * expected
        mask = (losses >= threshold) | (losses == largest)
        return divmod(sample_categorical(losses * mask, generator), q_v)
    else:
        raise ParameterError(f"Unsupported selection rule: {rule}.")
