import numpy as np
from hypothesis import strategies as st


@st.composite
def unit_vectors(draw):
    v = np.array(
        [
            draw(st.floats(-1, 1, allow_nan=False)),
            draw(st.floats(-1, 1, allow_nan=False)),
            draw(st.floats(-1, 1, allow_nan=False)),
        ]
    )
    norm = np.linalg.norm(v)
    if norm < 1e-3:
        v = np.array([0.0, 0.0, 1.0])
        norm = 1.0
    return v / norm
