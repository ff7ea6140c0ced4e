from __future__ import annotations

import numpy as np
from hypothesis import strategies as st


@st.composite
def matrices(draw, max_dim: int = 8, complex_ok: bool = True, min_dim: int = 1):
    m = draw(st.integers(min_dim, max_dim))
    n = draw(st.integers(min_dim, max_dim))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    if complex_ok and draw(st.booleans()):
        A = A + 1j * rng.standard_normal((m, n))
    return A


seeds = st.integers(0, 2**32 - 1)
