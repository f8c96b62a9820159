"""
Pinned numeric constants for every colour conversion in the toolkit.

RGB -> LMS uses the matrix from the Vienot/Brettel/Mollon (1999) derivation,
as published with the daltonize reference code. The dichromat projection
coefficients below come from the same derivation, so the white point is a
fixed point of each projection (see tests/unit/test_simulate.py).

HSL hue branches: some printed versions of the hue formula repeat the (G-B)
numerator in all four branches. That is a typesetting slip; the standard
numerators (G-B), (B-R), (R-G) for MAX = R, G, B are used here, since the
HSL round trip cannot hold otherwise.
"""

# sRGB transfer function (IEC 61966-2-1)
SRGB_DECODE_THRESHOLD = 0.04045
SRGB_ENCODE_THRESHOLD = 0.0031308
SRGB_LINEAR_SLOPE = 12.92
SRGB_GAMMA = 2.4
SRGB_OFFSET = 0.055

# Linear RGB -> LMS
RGB_TO_LMS_ROWS = (
    (17.8824, 43.5161, 4.11935),
    (3.45565, 27.1554, 3.86714),
    (0.0299566, 0.184309, 1.46709),
)

# Dichromat projections acting on LMS column vectors.
# Each replaces the missing cone's response with a combination of the other two.
PROTAN_M_COEF = 2.0234
PROTAN_S_COEF = -2.5258

DEUTAN_L_COEF = 0.4942
DEUTAN_S_COEF = 1.2483

# Not in the protan/deutan tables; same lineage, chosen so that
# TRITAN_L_COEF * L_w + TRITAN_M_COEF * M_w == S_w for the white point.
TRITAN_L_COEF = -0.395913
TRITAN_M_COEF = 0.801109

PROTAN_ROWS = (
    (0.0, PROTAN_M_COEF, PROTAN_S_COEF),
    (0.0, 1.0, 0.0),
    (0.0, 0.0, 1.0),
)
DEUTAN_ROWS = (
    (1.0, 0.0, 0.0),
    (DEUTAN_L_COEF, 0.0, DEUTAN_S_COEF),
    (0.0, 0.0, 1.0),
)
TRITAN_ROWS = (
    (1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (TRITAN_L_COEF, TRITAN_M_COEF, 0.0),
)

# Error redistribution for daltonization, acting on linear RGB error vectors
ERROR_SHIFT_RG_ROWS = (
    (0.0, 0.0, 0.0),
    (0.7, 1.0, 0.0),
    (0.7, 0.0, 1.0),
)
ERROR_SHIFT_BY_ROWS = (
    (1.0, 0.0, 0.7),
    (0.0, 1.0, 0.7),
    (0.0, 0.0, 0.0),
)

# Linear sRGB -> CIE XYZ, D65. The reference white is taken as the row sums
# so that every neutral maps exactly onto the L* axis.
RGB_TO_XYZ_ROWS = (
    (0.4124564, 0.3575761, 0.1804375),
    (0.2126729, 0.7151522, 0.0721750),
    (0.0193339, 0.1191920, 0.9503041),
)

# CIELAB companding
LAB_EPSILON = (6.0 / 29.0) ** 3
LAB_KAPPA_DIV = 3.0 * (6.0 / 29.0) ** 2
LAB_OFFSET = 4.0 / 29.0
