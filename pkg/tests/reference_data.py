"""Published values for the 5-state test chain."""

import numpy as np

KEMENY_P = np.array([
    [0.831, 0.033, 0.013, 0.028, 0.095],
    [0.046, 0.788, 0.016, 0.038, 0.112],
    [0.038, 0.034, 0.785, 0.036, 0.107],
    [0.054, 0.045, 0.017, 0.728, 0.156],
    [0.082, 0.065, 0.023, 0.071, 0.759],
])

# GTH in double precision, 15 decimal places
PI_GTHD = np.array([
    0.270457577293538, 0.184235456501417, 0.076135265451860,
    0.147597142335324, 0.321574558417861,
])

# 12 decimal places
M_PUBLISHED = np.array([
    [3.697437542727, 22.374164571709, 57.756742192108, 23.278850538432, 9.598732858601],
    [17.032615490720, 5.427836850679, 56.864516889123, 22.100075015307, 8.844407674651],
    [17.667201055109, 22.106202543394, 13.134517809389, 22.292628444747, 9.020416501550],
    [16.341175493452, 21.005100548563, 56.552837505099, 6.775198924435, 7.609106618566],
    [15.243523199997, 20.060109096789, 55.798746557709, 20.158095744297, 3.109698742711],
])

# 13 decimal places
A_PUBLISHED = np.array([
    [3.1905741863522, -0.9375239582265, -0.4087732024356, -0.6983862380226, -1.1458907876676],
    [-1.4160257342402, 3.1845904654802, -0.3408433921500, -0.5244023393545, -0.9033189997355],
    [-1.5876542085704, -0.8881558516147, 3.9885516959952, -0.5528226752867, -0.9599189605234],
    [-1.2290205477352, -0.6852938229425, -0.3171135995114, 2.7375055783011, -0.5060776081121],
    [-0.9321521677369, -0.5111928914350, -0.2597006850570, -0.2377717484790, 1.9408174927079],
])

KEMENY_CSV = "\n".join(",".join(repr(v) for v in row) for row in KEMENY_P.tolist()) + "\n"
