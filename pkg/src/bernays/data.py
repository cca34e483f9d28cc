"""Published C(D) values for small fundamental discriminants, grouped by omega(D)."""

TABLE_OMEGA_1 = {
    -3: 0.638909405, -4: 0.764223654, -7: 0.724719521, -8: 0.872887558,
    -11: 0.677388018, -19: 0.606300131, -23: 0.841512352, -31: 0.801014576,
    -43: 0.500610055, -47: 0.891550880, -59: 0.735485997, -67: 0.448813095,
    -71: 0.938541302, -79: 0.812629337, -83: 0.684502354,
}
TABLE_OMEGA_2 = {
    -15: 0.501918636, -20: 0.535179999, -24: 0.558357114, -35: 0.407379938,
    -39: 0.518747305, -40: 0.473558100, -51: 0.390646647, -52: 0.420720518,
    -55: 0.458949554, -56: 0.563486772, -68: 0.520288297, -87: 0.512573818,
    -88: 0.375792661, -91: 0.317487516, -95: 0.528624390,
}
TABLE_OMEGA_3 = {
    -84: 0.310647641, -120: 0.296417662, -132: 0.274765289, -168: 0.267006498,
    -195: 0.220993565, -228: 0.237562625, -231: 0.309699577, -255: 0.307681243,
    -260: 0.293752522, -264: 0.319941656, -276: 0.309309571, -280: 0.223644570,
    -308: 0.277034255, -312: 0.223049066, -340: 0.204812008,
}
TABLE_OMEGA_4 = {
    -420: 0.164080141, -660: 0.143806822, -840: 0.139069358, -1092: 0.123274604,
    -1140: 0.171607125, -1155: 0.109195133, -1320: 0.121504603, -1380: 0.117420083,
    -1428: 0.114424422, -1540: 0.108139197, -1560: 0.161366493, -1716: 0.148895032,
    -1848: 0.109066658, -1860: 0.151207258, -1995: 0.093833104,
}

TABLE = {**TABLE_OMEGA_1, **TABLE_OMEGA_2, **TABLE_OMEGA_3, **TABLE_OMEGA_4}
TABLE_BY_OMEGA = {1: TABLE_OMEGA_1, 2: TABLE_OMEGA_2, 3: TABLE_OMEGA_3, 4: TABLE_OMEGA_4}

RECORD_D = -984452999
RECORD_C = 1.527855
EXCEEDING_PRIMES = (47, 71, 167, 191, 239)
