"""Frozen reference tables for the self-test.

Claim counts from a motor-liability portfolio, together with the
probability columns they must reproduce: waiting-time counts for the
second and third claim of each insured, and no-claim counts by entry age.
The self-test and the acceptance suite re-derive the probability columns
through the regular pipeline and compare against these values.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "NO_CLAIM_GRAND_TOTAL",
    "NO_CLAIM_POOLED",
    "NO_CLAIM_ROWS",
    "WAITING_TOTALS",
    "WAITING_YEARS",
    "waiting_counts",
    "waiting_probs",
]

# waiting time in years -> (count 1st->2nd claim, count 2nd->3rd claim,
#                           prob 1st->2nd, prob 2nd->3rd)
_WAITING = [
    (1, 153, 88, 0.018595, 0.055767),
    (2, 695, 126, 0.084468, 0.079848),
    (3, 1576, 226, 0.191541, 0.143219),
    (4, 1549, 224, 0.18826, 0.141952),
    (5, 1344, 172, 0.163345, 0.108999),
    (6, 928, 176, 0.112786, 0.111534),
    (7, 619, 138, 0.075231, 0.087452),
    (8, 386, 107, 0.046913, 0.067807),
    (9, 278, 86, 0.033787, 0.054499),
    (10, 189, 69, 0.02297, 0.043726),
    (11, 139, 61, 0.016894, 0.038657),
    (12, 101, 33, 0.012275, 0.020913),
    (13, 77, 21, 0.009358, 0.013308),
    (14, 40, 15, 0.004861, 0.009506),
    (15, 36, 16, 0.004375, 0.010139),
    (16, 15, 7, 0.001823, 0.004436),
    (17, 11, 3, 0.001337, 0.001901),
    (18, 11, 4, 0.001337, 0.002535),
    (19, 10, 3, 0.001215, 0.001901),
    (20, 7, 2, 0.000851, 0.001267),
    (21, 14, 1, 0.001702, 0.000634),
    (22, 6, 0, 0.000729, 0.0),
    (23, 8, 0, 0.000972, 0.0),
    (24, 7, 0, 0.000851, 0.0),
    (25, 7, 0, 0.000851, 0.0),
    (26, 2, 0, 0.000243, 0.0),
    (27, 0, 0, 0.0, 0.0),
    (28, 4, 0, 0.000486, 0.0),
    (29, 3, 0, 0.000365, 0.0),
    (30, 5, 0, 0.000608, 0.0),
    (31, 3, 0, 0.000365, 0.0),
    (32, 2, 0, 0.000243, 0.0),
    (33, 1, 0, 0.000122, 0.0),
    (34, 0, 0, 0.0, 0.0),
    (35, 1, 0, 0.000122, 0.0),
    (36, 0, 0, 0.0, 0.0),
    (37, 1, 0, 0.000122, 0.0),
]

WAITING_YEARS = np.array([r[0] for r in _WAITING])
#: grand totals of the two count columns
WAITING_TOTALS = (8228, 1578)


def waiting_counts(transition: str) -> np.ndarray:
    col = {"first-to-second": 1, "second-to-third": 2}[transition]
    return np.array([r[col] for r in _WAITING], dtype=np.int64)


def waiting_probs(transition: str) -> np.ndarray:
    col = {"first-to-second": 3, "second-to-third": 4}[transition]
    return np.array([r[col] for r in _WAITING])


# entry age -> (policies, policies with no claim, prob no claim, prob claim)
NO_CLAIM_ROWS = [
    (18, 279, 237, 0.849462, 0.150538),
    (19, 8863, 6745, 0.761029, 0.238971),
    (20, 12960, 9893, 0.763349, 0.236651),
    (21, 11745, 9346, 0.795743, 0.204257),
    (22, 4388, 3341, 0.761395, 0.238605),
    (23, 3137, 2335, 0.744342, 0.255658),
    (24, 2100, 1580, 0.752381, 0.247619),
    (25, 1651, 1248, 0.755906, 0.244094),
    (26, 1397, 1058, 0.757337, 0.242663),
    (27, 1092, 796, 0.728938, 0.271062),
    (28, 997, 748, 0.750251, 0.249749),
    (29, 1037, 748, 0.721311, 0.278689),
    (30, 944, 678, 0.718220, 0.28178),
    (31, 1120, 878, 0.783929, 0.216071),
    (32, 722, 534, 0.739612, 0.260388),
    (33, 659, 502, 0.761760, 0.23824),
    (34, 555, 425, 0.765766, 0.234234),
    (35, 486, 372, 0.765432, 0.234568),
    (36, 436, 329, 0.754587, 0.245413),
    (37, 408, 303, 0.742647, 0.257353),
    (38, 371, 274, 0.738544, 0.261456),
    (39, 380, 284, 0.747368, 0.252632),
    (40, 412, 291, 0.70631, 0.293689),
    (41, 461, 339, 0.735358, 0.264642),
    (42, 313, 240, 0.766773, 0.233227),
    (43, 289, 207, 0.716263, 0.283737),
    (44, 283, 212, 0.749117, 0.250883),
    (45, 248, 181, 0.72984, 0.270161),
    (46, 253, 198, 0.782609, 0.217391),
    (47, 214, 156, 0.728972, 0.271028),
    (48, 200, 144, 0.72, 0.28),
    (49, 224, 159, 0.709821, 0.290179),
    (50, 181, 135, 0.745856, 0.254144),
    (51, 168, 141, 0.839286, 0.160714),
    (52, 141, 107, 0.758865, 0.241135),
    (53, 127, 107, 0.842520, 0.15748),
    (54, 121, 106, 0.876033, 0.123967),
    (55, 100, 81, 0.81, 0.19),
    (56, 99, 84, 0.848485, 0.151515),
    (57, 87, 68, 0.781609, 0.218391),
    (58, 66, 57, 0.863636, 0.136364),
    (59, 70, 63, 0.9, 0.1),
]

#: pooled entry ages at and past 60: (policies, no claim, prob no claim, prob claim)
NO_CLAIM_POOLED = (600, 535, 0.891666667, 0.108333)

#: all entry ages combined
NO_CLAIM_GRAND_TOTAL = (60384, 46265, 0.766179783, 0.23382)
