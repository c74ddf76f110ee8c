"""Published reference values for the 6-qubit mitigation benchmark.

Input state ``(|W_6> + |GHZ_6>)/sqrt(2)``, decoherence only, g0 = 1 MHz,
T1 = 50 us. Rows follow the coupling factors ``A_VALUES`` and columns the
rotation-time factors ``B_VALUES`` of :mod:`daqcsim.mitigation`.
"""

import numpy as np

FIDELITY_GRID = np.array(
    [
        [0.7270, 0.8006, 0.8156, 0.8211, 0.8236],
        [0.7312, 0.8052, 0.8204, 0.8258, 0.8284],
        [0.7352, 0.8096, 0.8249, 0.8303, 0.8329],
        [0.7390, 0.8138, 0.8291, 0.8346, 0.8372],
        [0.7437, 0.8190, 0.8344, 0.8400, 0.8426],
    ]
)
FIDELITY_ZERO_DECOHERENCE = np.array([0.8651, 0.9532, 0.9713, 0.9778, 0.9808])
FIDELITY_IDEAL = np.array([0.8771, 0.9665, 0.9848, 0.9914, 0.9945])

Z0_GRID = np.array(
    [
        [0.1692, 0.2185, 0.2337, 0.2409, 0.2451],
        [0.1696, 0.2191, 0.2344, 0.2417, 0.2459],
        [0.1699, 0.2197, 0.2351, 0.2424, 0.2466],
        [0.1703, 0.2203, 0.2357, 0.2430, 0.2473],
        [0.1707, 0.2210, 0.2365, 0.2439, 0.2481],
    ]
)
Z0_ZERO_DECOHERENCE = np.array([0.1815, 0.2389, 0.2567, 0.2651, 0.2700])
Z0_IDEAL = np.array([0.1813, 0.2392, 0.2571, 0.2656, 0.2705])

# Stage-2 extrapolations of the zero-decoherence rows
FIDELITY_STAGE2 = {"linear": 0.9929, "quadratic": 0.9865, "cubic": 0.9862, "richardson": 0.9862}
Z0_STAGE2 = {"linear": 0.2895, "quadratic": 0.2881, "cubic": 0.2879, "richardson": 0.2883}
Z0_EXACT = 0.2887
