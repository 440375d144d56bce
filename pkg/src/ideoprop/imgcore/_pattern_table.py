"""Generated by ideoprop.imgcore.pattern.generate_pattern(0x5EED). Do not edit."""

PATTERN = (
    (-3, -5, 7, -3),
    (3, 0, 3, 1),
    (1, -14, -2, -5),
    (9, 5, 2, 5),
    (8, 3, 1, 10),
    (11, -1, 0, -4),
    (-6, -3, -3, 6),
    (-3, -4, 2, 0),
    (-8, 4, -2, 13),
    (-6, 6, -5, 3),
    (-3, 6, -9, -9),
    (-8, -10, 7, 10),
    (3, 5, 5, 0),
    (0, -5, -2, -4),
    (5, 1, -6, -6),
    (-13, 0, -10, -4),
    (8, -5, -8, -2),
    (1, -6, 6, -4),
    (1, 4, -1, 12),
    (-2, 7, -3, 0),
    (-7, 12, -9, 5),
    (6, -4, 2, 5),
    (-6, 5, -1, 2),
    (8, 7, -10, 1),
    (7, 3, 0, -12),
    (3, 2, 12, 4),
    (0, 5, 10, 8),
    (1, -4, -1, 9),
    (-3, -3, 0, -10),
    (2, 2, 9, 3),
    (8, 7, 1, 2),
    (5, -1, -3, -5),
    (-9, 6, 6, -4),
    (3, 2, 3, -7),
    (10, 6, 5, 1),
    (10, 4, 4, 3),
    (2, 2, -1, -8),
    (-6, 5, 3, -9),
    (12, 7, 7, -9),
    (-5, 4, 0, -5),
    (-11, -1, 2, 1),
    (12, 0, -6, 0),
    (0, 5, 0, 0),
    (-2, -1, 12, -9),
    (0, -6, -6, -2),
    (1, -7, 5, 5),
    (0, -9, 0, -1),
    (-7, -2, -4, -6),
    (3, -5, 8, -3),
    (3, -5, 1, 0),
    (7, -1, 0, -6),
    (-5, 5, 0, -10),
    (-7, 5, 11, 9),
    (6, -4, 1, 3),
    (-10, 3, 1, -8),
    (5, 4, 3, -2),
    (10, 0, 0, 8),
    (4, 8, 3, 12),
    (-12, 0, -1, -5),
    (-3, 10, 3, 9),
    (0, 4, 7, 5),
    (-3, 5, 2, -14),
    (-5, -9, -7, 2),
    (-7, -1, -1, 2),
    (-1, -3, -2, -3),
    (7, 11, 3, 3),
    (2, 2, 1, 0),
    (4, 4, -9, 2),
    (-1, 2, 4, -2),
    (-9, -4, 5, 7),
    (-9, -8, 1, -4),
    (5, 5, -4, 4),
    (-1, 8, -2, -4),
    (-7, -1, -2, 10),
    (1, -1, -13, 7),
    (1, 12, 3, 1),
    (3, 3, 6, -1),
    (0, 1, 3, -6),
    (0, 6, -2, 13),
    (-3, 0, -2, -2),
    (-1, 8, 9, -6),
    (8, -2, -1, -1),
    (1, 1, 13, -1),
    (-6, -12, -1, 4),
    (1, -8, -1, 7),
    (1, -5, 9, 8),
    (-6, -10, -2, -7),
    (-2, -4, 4, -3),
    (-2, -1, 0, 4),
    (-6, -7, -1, 7),
    (6, -4, -3, 7),
    (-11, -2, 7, 5),
    (0, 0, 8, 7),
    (9, 5, 1, 1),
    (4, 0, -13, -7),
    (2, -9, 10, -8),
    (-1, 3, -9, 8),
    (2, 10, 4, 11),
    (5, 9, -5, -11),
    (-9, -8, 7, -7),
    (-4, 9, 3, 13),
    (-1, -7, -10, 6),
    (-3, -1, 0, -3),
    (10, 11, 0, 2),
    (6, -3, 5, 5),
    (-11, 1, 0, 2),
    (8, 2, -9, 6),
    (-6, -7, 4, -1),
    (-5, -9, -1, -2),
    (2, -1, -8, -1),
    (-10, -2, 10, 3),
    (4, 3, -3, -5),
    (10, 8, -1, 7),
    (9, 4, 3, -6),
    (1, -10, 5, 9),
    (-4, 4, -9, -4),
    (5, 8, -1, 4),
    (-4, 6, 3, 14),
    (-5, 9, -5, 4),
    (-10, -7, 3, -5),
    (7, -10, 14, 2),
    (-6, 6, 6, 2),
    (-13, 1, -9, -1),
    (-2, -3, 5, 2),
    (-5, -3, -7, -8),
    (12, 5, 1, -5),
    (-10, -9, 8, 6),
    (-5, 6, -5, 4),
    (1, 5, 5, 0),
    (3, -2, -1, 1),
    (5, -3, 3, -1),
    (3, -5, -8, 10),
    (-5, 1, -5, -4),
    (3, 6, 0, 6),
    (-7, 10, -10, 2),
    (1, -6, 2, -3),
    (9, -5, 8, -2),
    (-4, -8, -7, 2),
    (8, 0, 1, -5),
    (1, 5, -3, 1),
    (6, 0, 1, 7),
    (-3, 1, 1, 9),
    (4, 6, 0, 0),
    (13, 0, 2, -3),
    (-6, -13, 0, 3),
    (-12, -5, 7, 12),
    (-7, 3, 6, 1),
    (0, -11, -9, -1),
    (-1, -13, 1, 1),
    (-6, -1, 12, 6),
    (-6, -8, 1, -8),
    (-1, -7, 2, 6),
    (0, -1, 0, 5),
    (4, -6, -5, 3),
    (3, -9, 4, -4),
    (3, 7, -1, -8),
    (-2, -5, -2, 3),
    (1, -6, -11, -4),
    (-13, 0, -8, -11),
    (-14, -4, 10, -9),
    (3, -8, 1, 2),
    (-7, 5, -2, -5),
    (2, -3, -12, -1),
    (2, 3, -9, -4),
    (4, 0, -3, -11),
    (10, -7, 1, -1),
    (-2, 4, 10, -9),
    (-4, 9, 12, 6),
    (7, 9, -2, 13),
    (-5, -7, 3, -6),
    (-7, -4, -1, -10),
    (11, 0, 9, -2),
    (4, 1, 2, -4),
    (4, 6, -10, 1),
    (11, 3, -3, 3),
    (11, -8, -9, -2),
    (1, 3, -2, 2),
    (-1, -3, -8, -8),
    (-2, -5, -4, 0),
    (1, 2, -5, -12),
    (-14, 4, -7, 3),
    (-3, -5, 8, 2),
    (-11, -3, 10, -6),
    (0, -1, -11, 3),
    (6, 5, -3, -4),
    (-4, -11, 9, 9),
    (1, -1, -4, 0),
    (1, 0, 2, -4),
    (3, -7, 5, -4),
    (-4, -6, -11, -1),
    (0, 5, 0, -6),
    (1, -3, -8, 10),
    (12, 7, -6, 7),
    (3, 12, 4, 7),
    (0, 6, 2, -4),
    (-4, 0, 8, -1),
    (6, 5, 0, 3),
    (-4, 14, -11, -9),
    (9, 3, 0, 1),
    (-1, 5, 3, -5),
    (5, 6, -1, -2),
    (7, 4, 3, -2),
    (1, -7, -7, -3),
    (-4, -1, -2, -5),
    (-6, 6, -6, 5),
    (2, 9, -1, 2),
    (5, 4, 9, -4),
    (3, 3, 1, -9),
    (-4, -3, -3, -1),
    (-3, -3, -7, 1),
    (-2, -11, -10, 4),
    (-6, 1, -1, -14),
    (-4, -6, -2, 13),
    (1, 0, -2, -3),
    (2, 3, -1, 11),
    (-4, 5, -4, 6),
    (2, -5, -3, 3),
    (-1, 1, 11, -4),
    (0, 2, 2, 2),
    (1, -6, -7, -1),
    (-4, 5, -2, 1),
    (4, -1, -3, 1),
    (-1, 6, 7, -10),
    (-6, 2, -5, -12),
    (-1, 7, -4, -5),
    (-1, -5, 6, -7),
    (-3, 14, 3, -6),
    (-4, 1, -6, -7),
    (0, -4, -8, 6),
    (4, -7, -3, 10),
    (-3, 5, 5, -7),
    (6, 6, 4, 6),
    (-3, -10, 10, 4),
    (-7, 3, -6, -5),
    (1, 8, -13, 7),
    (-3, -4, -1, 4),
    (-5, 0, -2, -3),
    (0, 1, 5, -3),
    (4, 3, -6, -3),
    (5, -6, 4, -1),
    (6, -6, -4, -4),
    (3, -7, -4, -4),
    (6, -3, 6, -2),
    (-2, 5, 4, -7),
    (10, -6, 8, 2),
    (-5, -7, -7, -3),
    (-12, -4, 0, 4),
    (-3, 2, 2, -10),
    (-2, -3, 6, 0),
    (2, -6, -1, -12),
    (-1, -1, 1, -4),
    (7, -1, 6, -1),
    (-8, 3, 0, 5),
    (8, 3, -1, -5),
    (4, -6, 4, -2),
    (-5, -3, -3, -3),
)
