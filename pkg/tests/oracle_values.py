"""Reference values frozen from tools/oracles.py (mpmath, 25 digits)."""

LOG_SQRT_PI = 0.57236494292470009
LOGGAMMA_2_3I = complex(-2.0928517530927333, 2.3023965434668676)
LOGGAMMA_HALF_40I = complex(-61.912914538591192, 107.55621986920906)
ZETA_HALF = -1.4603545088095868
THETA_100 = 87.97216523178722
THETA_1000 = 2034.5464280380316
Z_14_0 = -0.10562626777988261
Z_14_2 = 0.05204527171556437
Z_50 = -0.34073500595502498
Z_1000 = 0.99779463752158661
Z_20000 = 1.3447013347897105
LAURENT_C1 = -0.68344573660627976
MAIN_TERM_100 = 292.17244493818116
A_2 = 0.0012152777777777778
H_0 = 1.2429228616011458
H_1 = 0.47103516587764468
H_40 = 0.013603913679605292
E_10 = 3.7913410740413333
L1_50 = 0.042527203203458118
L1_1 = 1.0175027414097266
E_1000 = -11.801779038074829
MELLIN_1000_S2 = 0.67140178206379513
MELLIN_1000_S15_3 = complex(0.24952033932859961, -0.18167323436087448)
