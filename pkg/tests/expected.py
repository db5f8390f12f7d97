"""Published q-expansions of g_1..g_6 and h_1..h_6 through q^8 (h_6 through q^7)."""

from fractions import Fraction

HALF = Fraction(-1, 2)

G_TABLE = {
    1: [HALF, 1, 1, -1, -2, -3, 1, 4, 8],
    2: [0, 1, 2, -1, -5, -11, -2, 12, 38],
    3: [0, 1, 4, 1, -11, -39, -30, 22, 170],
    4: [0, 1, 8, 11, -17, -131, -200, -72, 680],
    5: [0, 1, 16, 49, 13, -399, -1074, -1226, 2078],
    6: [0, 1, 32, 179, 295, -971, -5072, -10128, 728],
}

H_TABLE = {
    1: [HALF, 2, 5, 7, 12, 14, 24, 27, 42],
    2: [0, 4, 17, 37, 83, 140, 273, 425, 736],
    3: [0, 8, 59, 197, 579, 1316, 3019, 5919, 11730],
    4: [0, 16, 209, 1057, 4073, 12032, 32883, 78209, 178426],
    5: [0, 32, 755, 5717, 28887, 108692, 355399, 1007247, 2645982],
    6: [0, 64, 2777, 31177, 206513, 977960, 3828723, 12805745],
}


def matches(series, row):
    """Every listed coefficient agrees exactly."""
    return all(series[n] == Fraction(c) for n, c in enumerate(row))
