"""Built-in benchmark problems and their published reference values.

``MS10_*``: 10-DOF mass-spring system with unit masses and 1 kN/m springs
(symmetric, M = I). ``GYRO3_*``: 3-DOF gyroscopic system (T-even, M = I).
Matrices are stored at the printed precision (4-5 decimals).
"""

import numpy as np

# 10-DOF mass-spring system, M = I

MS10_D = np.array([
    [  0.481, -8.3809,       0,       0,       0,       0,       0,       0,       0,       0],
    [-8.3809,  8.3809, -1.0254,       0,       0,       0,       0,       0,       0,       0],
    [      0, -1.0254,  1.0254, -7.2827,       0,       0,       0,       0,       0,       0],
    [      0,       0, -7.2827,  7.2827,  -4.405,       0,       0,       0,       0,       0],
    [      0,       0,       0,  -4.405,   4.405, -9.9719,       0,       0,       0,       0],
    [      0,       0,       0,       0, -9.9719,  9.9719, -5.6247,       0,       0,       0],
    [      0,       0,       0,       0,       0, -5.6247,  5.6247, -4.6585,       0,       0],
    [      0,       0,       0,       0,       0,       0, -4.6585,  4.6585, -4.1901,       0],
    [      0,       0,       0,       0,       0,       0,       0, -4.1901,  4.1901,  -2.116],
    [      0,       0,       0,       0,       0,       0,       0,       0,  -2.116,   2.116],
])

MS10_K = np.array([
    [ 2000, -1000,     0,     0,     0,     0,     0,     0,     0,     0],
    [-1000,  3000, -1000,     0, -1000,     0,     0,     0,     0,     0],
    [    0, -1000,  2000, -1000,     0,     0,     0,     0,     0,     0],
    [    0,     0, -1000,  3000, -1000,     0,     0, -1000,     0,     0],
    [    0, -1000,     0, -1000,  3000, -1000,     0,     0,     0,     0],
    [    0,     0,     0,     0, -1000,  2000, -1000,     0,     0,     0],
    [    0,     0,     0,     0,     0, -1000,  2000, -1000,     0,     0],
    [    0,     0,     0, -1000,     0,     0, -1000,  3000, -1000,     0],
    [    0,     0,     0,     0,     0,     0,     0, -1000,  2000, -1000],
    [    0,     0,     0,     0,     0,     0,     0,     0, -1000,  2000],
])

MS10_LAM_C = np.array([
    [ -6.7757,  71.1468,        0,        0],
    [-71.1468,  -6.7757,        0,        0],
    [       0,        0,  -6.2938,  65.6677],
    [       0,        0, -65.6677,  -6.2938],
])

MS10_LAM_A = np.array([
    [-6.16,  69.8,     0,     0],
    [-69.8, -6.16,     0,     0],
    [    0,     0,  -4.7,  64.9],
    [    0,     0, -64.9,  -4.7],
])

MS10_X_C = np.array([
    [-0.28211, -0.08966, -0.29723,   0.0795],
    [ 0.83728,  0.03582,  0.60914, -0.29543],
    [-0.59676, -0.02745, -0.10053,  0.21115],
    [       1,        0, -0.26137,  -0.0287],
    [-0.91905, -0.05869, -0.44955,  0.10855],
    [ 0.21414,  0.23271,  0.45059,  0.21796],
    [ 0.16581, -0.13691,  -0.6087, -0.17516],
    [-0.63899,  0.23427,        1,        0],
    [  0.2364, -0.07021, -0.51521,  0.00617],
    [ -0.0722,  0.03048,  0.21217, -0.03517],
])

MS10_P = np.array([
    [ 0.00098, -0.96441,        0,        0],
    [ 1.18488, -0.00098,        0,        0],
    [       0,        0,  0.00831, -5.00141],
    [       0,        0,  5.25988, -0.00831],
])

MS10_Z = np.array([
    [ 0.07448, -0.00328,  0.00042, -0.00065],
    [-0.00328,  0.06075,   0.0008, -0.00029],
    [ 0.00042,   0.0008,  0.02586, -0.01101],
    [-0.00065, -0.00029, -0.01101,  0.01727],
])

MS10_DM = np.array([
    [  9.3095, -24.4279,  14.5031, -18.7431,  23.9416,  -8.4718,   1.6675,   3.4774,  -0.0641,   -0.665],
    [-24.4279,  67.9437, -41.9671,  57.9737, -67.6659,  19.4633,   0.7605, -20.6713,    4.756,   0.0216],
    [ 14.5031, -41.9671,  28.1813, -43.3236,  43.8138, -10.7203,  -5.1443,  23.2965,  -7.8302,   1.9365],
    [-18.7431,  57.9737, -43.3236,  75.9119, -65.2624,  12.7806,  16.1761, -54.3748,  20.9451,  -6.8164],
    [ 23.9416, -67.6659,  43.8138, -65.2624,  69.7849, -19.2399,  -4.4682,  30.3068,  -9.2572,   1.8447],
    [ -8.4718,  19.4633, -10.7203,  12.7806, -19.2399,  10.4451,  -4.9098,   3.0152,  -2.2823,   1.3902],
    [  1.6675,   0.7605,  -5.1443,  16.1761,  -4.4682,  -4.9098,  11.1734, -24.1222,  10.8057,  -4.2638],
    [  3.4774, -20.6713,  23.2965, -54.3748,  30.3068,   3.0152, -24.1222,  60.4317, -25.8859,    9.829],
    [ -0.0641,    4.756,  -7.8302,  20.9451,  -9.2572,  -2.2823,  10.8057, -25.8859,  11.4607,  -4.4693],
    [  -0.665,   0.0216,   1.9365,  -6.8164,   1.8447,   1.3902,  -4.2638,    9.829,  -4.4693,   1.8039],
]) * 1e-3

MS10_DD = np.array([
    [ 0.1225, -0.2216,  0.2315, -0.4845,  0.1814, -0.0467, -0.2684,  0.4364, -0.2122,  0.0689],
    [-0.2216,  0.1724, -0.3101,  0.7276, -0.0057,  0.0788,  0.5863, -0.6878,  0.4014, -0.1192],
    [ 0.2315, -0.3101,   0.284, -0.5046,  0.2195, -0.2047, -0.2389,  0.2513, -0.1695,  0.0314],
    [-0.4845,  0.7276, -0.5046,  0.7066, -0.6532,  0.6396,  0.0267,  0.0979,  0.0462,  0.0496],
    [ 0.1814, -0.0057,  0.2195, -0.6532, -0.0649, -0.1825, -0.5081,  0.6043, -0.3935,  0.1195],
    [-0.0467,  0.0788, -0.2047,  0.6396, -0.1825,  0.0679,  0.3234, -0.7218,  0.3438, -0.1373],
    [-0.2684,  0.5863, -0.2389,  0.0267, -0.5081,  0.3234, -0.3182,  0.5763, -0.2716,  0.1421],
    [ 0.4364, -0.6878,  0.2513,  0.0979,  0.6043, -0.7218,  0.5763, -1.1491,  0.4605, -0.2451],
    [-0.2122,  0.4014, -0.1695,  0.0462, -0.3935,  0.3438, -0.2716,  0.4605, -0.1955,  0.1051],
    [ 0.0689, -0.1192,  0.0314,  0.0496,  0.1195, -0.1373,  0.1421, -0.2451,  0.1051, -0.0505],
])

MS10_DK = np.array([
    [ 28.0577, -81.5942,  52.7467, -81.4589,  88.5228, -28.0835,  -1.6524,  38.1178, -11.1266,   2.8698],
    [-81.5942,  241.938, -160.757,  255.654, -262.638,  75.0079,  19.1931, -137.218,  43.9081, -12.5844],
    [ 52.7467, -160.757,  112.075, -186.242,   175.56, -42.0997, -27.4937,  117.461, -41.1852,  12.9837],
    [-81.4589,  255.654, -186.242,  323.432, -283.443,  57.5522,   64.861,  -228.18,  84.4493, -27.9849],
    [ 88.5228, -262.638,   175.56, -283.443,  290.166, -85.8764, -19.0487,  152.921, -49.7268,  14.6872],
    [-28.0835,  75.0079, -42.0997,  57.5522, -85.8764,  42.9652, -22.8915,  -0.1737,  -5.3397,   3.0183],
    [ -1.6524,  19.1931, -27.4937,   64.861, -19.0487, -22.8915,  49.3152, -88.8186,  38.7107, -14.2052],
    [ 38.1178, -137.218,  117.461,  -228.18,  152.921,  -0.1737, -88.8186,  214.387, -87.0151,  30.7811],
    [-11.1266,  43.9081, -41.1852,  84.4493, -49.7268,  -5.3397,  38.7107, -87.0151,  36.2412, -13.0667],
    [  2.8698, -12.5844,  12.9837, -27.9849,  14.6872,   3.0183, -14.2052,  30.7811, -13.0667,    4.786],
])

# 3-DOF gyroscopic system, M = I

GYRO3_D = np.array([
    [ 0, -2,  4],
    [ 2,  0, -2],
    [-4,  2,  0],
])

GYRO3_K = np.array([
    [13,  2,  1],
    [ 2,  7,  2],
    [ 1,  2,  4],
])

GYRO3_LAM_C = np.array([
    [      0,  0.8878,       0,       0],
    [-0.8878,       0,       0,       0],
    [      0,       0,       0,  3.1895],
    [      0,       0, -3.1895,       0],
])

GYRO3_LAM_A = np.array([
    [   0,    2,    0,    0],
    [  -2,    0,    0,    0],
    [   0,    0,    0,  3.5],
    [   0,    0, -3.5,    0],
])

GYRO3_X_C = np.array([
    [-0.07809, -0.42447,  0.36993,  0.04128],
    [-0.41817,  0.44484,        1,        0],
    [       1,        0,  0.46926,  0.27553],
])

GYRO3_P = np.array([
    [-0.64146, -0.87909,        0,        0],
    [   1.275,   -1.275,        0,        0],
    [       0,        0,  0.55689,  0.99159],
    [       0,        0, -0.90016,  0.90016],
])

GYRO3_Z = np.array([
    [-0.06974, -0.05987,  0.00391,  0.00614],
    [-0.05987, -0.46773,  0.00287,  0.02937],
    [ 0.00391,  0.00287, -0.00892, -0.20898],
    [ 0.00614,  0.02937, -0.20898, -0.12565],
])

GYRO3_M_UPDATED = np.array([
    [ 9.0132,  0.6435, -0.0005],
    [ 0.6435,  9.0789,  -0.526],
    [-0.0005,  -0.526,  8.7177],
]) * 0.1

GYRO3_D_UPDATED = np.array([
    [      0, -1.6534,  2.8543],
    [ 1.6534,       0, -1.2119],
    [-2.8543,  1.2119,       0],
])

GYRO3_K_UPDATED = np.array([
    [15.1304,  2.0337,  0.2838],
    [ 2.0337,  9.5026, -0.3897],
    [ 0.2838, -0.3897,  9.2174],
])

MS10_LAMBDA_C = (-6.7757 + 71.1468j, -6.2938 + 65.6677j)
MS10_LAMBDA_A = (-6.16 + 69.8j, -4.7 + 64.9j)
MS10_A = (0.00098, 0.00831)
MS10_GAMMA = (4.2986 - 485.9606j, 20.523 - 319.028j)
MS10_RR_F = 7.5511e-14
MS10_RR_A = 4.6172e-14

GYRO3_LAMBDA_C = (0.8878j, 3.1895j)
GYRO3_LAMBDA_A = (2j, 3.5j)
GYRO3_NORMS = (0.2202, 2.0268, 7.1044)
GYRO3_RR_F = 7.0842e-16
GYRO3_RR_A = 3.2018e-16


def _abc(P, k):
    """``(a, b, c)`` of the k-th 2x2 block ``[[a, b], [-c, c]]`` of ``P``."""
    B = P[2 * k:2 * k + 2, 2 * k:2 * k + 2]
    return float(B[0, 0]), float(B[0, 1]), float(B[1, 1])


def _rows(A):
    return np.asarray(A, dtype=float).tolist()


def _pair(z):
    return [float(np.real(z)), float(np.imag(z))]


def mass_spring_10():
    """Problem document for the 10-DOF symmetric benchmark."""
    groups = [{"lam_c": _pair(lc), "lam_a": _pair(la), "x_c": "compute", "a": a}
              for lc, la, a in zip(MS10_LAMBDA_C, MS10_LAMBDA_A, MS10_A)]
    return {
        "name": "mass-spring-10",
        "class": "symmetric",
        "field": "real",
        "matrices": {"M": {"identity": 10}, "D": _rows(MS10_D), "K": _rows(MS10_K)},
        "groups": groups,
        "method": "auto",
    }


def gyroscopic_3():
    """Problem document for the 3-DOF gyroscopic benchmark."""
    groups = []
    for k, (lc, la) in enumerate(zip(GYRO3_LAMBDA_C, GYRO3_LAMBDA_A)):
        a, b, c = _abc(GYRO3_P, k)
        groups.append({"lam_c": _pair(lc), "lam_a": _pair(la), "x_c": "compute",
                       "a": a, "b": b, "c": c})
    return {
        "name": "gyroscopic-3",
        "class": "t-even",
        "field": "real",
        "matrices": {"M": {"identity": 3}, "D": _rows(GYRO3_D), "K": _rows(GYRO3_K)},
        "groups": groups,
        "method": "auto",
    }


BUILTIN = {"mass-spring-10": mass_spring_10, "gyroscopic-3": gyroscopic_3}
