//! Published classification data used as targets for the survey drivers.

/// Quadratic rationality fields: (Delta_K, every Delta_E).
pub const QUADRATIC: [(i64, &[i64]); 23] = [
    (5, &[-15, -20, -35, -40, -115, -235]),
    (8, &[-4, -8, -24, -88]),
    (12, &[-3, -4]),
    (13, &[-52, -91, -403]),
    (17, &[-51, -187]),
    (21, &[-7]),
    (24, &[-8]),
    (28, &[-7]),
    (29, &[-232]),
    (33, &[-11]),
    (37, &[-148]),
    (41, &[-123]),
    (44, &[-11]),
    (57, &[-19]),
    (61, &[-427]),
    (76, &[-19]),
    (89, &[-267]),
    (129, &[-43]),
    (172, &[-43]),
    (201, &[-67]),
    (268, &[-67]),
    (489, &[-163]),
    (652, &[-163]),
];

/// Cubic rationality fields: (Delta_K, Delta_E).
pub const CUBIC: [(i64, i64); 18] = [
    (49, -7),
    (81, -3),
    (321, -107),
    (621, -23),
    (837, -31),
    (993, -331),
    (1593, -59),
    (1929, -643),
    (2241, -83),
    (3753, -139),
    (5697, -211),
    (7641, -283),
    (8289, -307),
    (10233, -379),
    (13473, -499),
    (14769, -547),
    (23841, -883),
    (24489, -907),
];

/// Value fields E K for odd Delta_E with class group C2: (Delta_E, Delta_K).
pub const QUAD_ODD: [(i64, i64); 11] = [
    (-15, 5),
    (-35, 5),
    (-51, 17),
    (-91, 13),
    (-115, 5),
    (-123, 41),
    (-187, 17),
    (-235, 5),
    (-267, 89),
    (-403, 13),
    (-427, 61),
];

/// Value fields E K for Delta_E = 0 mod 8 with class group C2: (Delta_E, Delta_K).
pub const QUAD_EVEN: [(i64, i64); 4] = [(-24, 8), (-40, 5), (-88, 8), (-232, 29)];

/// Cubic value fields for class group C3 and l = 1 mod 6: (Delta_E, Delta_K).
pub const QUAD_E3: [(i64, i64); 16] = [
    (-23, 621),
    (-31, 837),
    (-59, 1593),
    (-83, 2241),
    (-107, 321),
    (-139, 3753),
    (-211, 5697),
    (-283, 7641),
    (-307, 8289),
    (-331, 993),
    (-379, 10233),
    (-499, 13473),
    (-547, 14769),
    (-643, 1929),
    (-883, 23841),
    (-907, 24489),
];

/// Exponent 2 fields where R1 holds with r = 4.
pub const R1_ORDER_FOUR: [i64; 7] = [-20, -24, -40, -52, -88, -148, -232];

/// Exponent 2 fields where R1 holds with r = 6.
pub const R1_ORDER_SIX: [i64; 5] = [-15, -24, -51, -123, -267];
