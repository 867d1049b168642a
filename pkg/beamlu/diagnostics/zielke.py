from __future__ import annotations

import math

from beamlu.core.errors import InvalidArgumentError
from beamlu.diagnostics.checks import BoundCheck
from beamlu.factorization.beam import beam_factor
from beamlu.factorization.block_lu import growth_factor
from beamlu.gallery.families import zielke
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.norms import MAX

ZIELKE_REL_TOL = 1e-8


def zielke_growth_check(n: int, blocking: BlockingScheme | int, tau: float) -> BoundCheck:
    """BEAM on Zielke(n) grows by exactly τ^{1−n_t} in the max norm.

    Every eliminated block carries one singular value at zero that is raised
    to τ; the last block stays unmodified. Measured is the relative error of
    P_max against τ^{1−n_t}.
    """
    if isinstance(blocking, int):
        blocking = BlockingScheme.uniform(n, blocking)
    blocking.check_dim(n)
    if not 0.0 < tau <= 0.5:
        raise InvalidArgumentError(f"zielke check needs 0 < tau <= 1/2, got {tau}")
    if min(blocking.sizes) < 2:
        raise InvalidArgumentError("zielke check needs every block of size >= 2")

    f = beam_factor(zielke(n), blocking, tau=tau, woodbury=False, trace_norms={MAX})
    nt = blocking.n_blocks
    p_max = growth_factor(f.factors.trace, MAX)
    expected = tau ** (1 - nt)
    rel = abs(p_max - expected) / expected if math.isfinite(p_max) else math.inf
    counts = f.mods.per_block(nt)
    ctx = {
        "n": n,
        "blocking": blocking.label,
        "tau": tau,
        "p_max": p_max,
        "expected": expected,
        "counts": counts,
        "m": f.mods.count,
    }
    if all(c == 1 for c in counts[:-1]) and counts[-1] <= 1:
        return BoundCheck.compare("zielke_growth", rel, ZIELKE_REL_TOL, ctx)
    return BoundCheck(
        name="zielke_growth",
        measured=rel,
        bound=ZIELKE_REL_TOL,
        satisfied=False,
        context=ctx,
        note=f"expected one modification per eliminated block, got {counts}",
    )
