"""Reference squares, clusterings and constraint lists used as test fixtures."""

import re

from pncmaps.latin import Clustering, GridMap


def grid(text, t=None):
    return GridMap.parse(text, t)


def cell_groups(text):
    """'{(0,1)(1,0)}, {(0,2)(3,0)}' -> set of frozensets of cells."""
    out = set()
    for g in re.findall(r"\{([^{}]*)\}", text):
        cells = re.findall(r"\((\d+),(\d+)\)", g)
        out.add(frozenset((int(r), int(c)) for r, c in cells))
    return out


def clustering(text, shape=(4, 4)):
    return Clustering.from_blocks(shape, [sorted(g) for g in cell_groups(text)])


# QPSK squares
L1 = "0 1 2 3/1 0 3 2/2 3 0 1/3 2 1 0"
L2 = "0 1 2 3/1 3 0 2/2 0 3 1/3 2 1 0"
L3 = "0 1 2 3/1 0 3 2/2 3 1 0/3 2 0 1"
L6 = "1 2 3 0/0 3 2 1/3 0 1 2/2 1 0 3"
L11 = "3 0 1 4/4 1 2 0/2 4 0 3/1 3 4 2"
L12 = "4 0 1 2/3 4 2 0/2 1 4 3/1 3 0 4"
PARTIAL_1 = "_ 0 1 _/_ _ 2 0/2 _ _ 3/1 3 _ _"
PARTIAL_2 = "_ 0 1 _/_ _ 2 3/0 _ _ 1/3 2 _ _"

# 8-PSK squares
SQ8_13_M0 = ("0 1 2 3 4 5 6 7/5 4 7 6 1 0 3 2/6 3 0 5 2 7 4 1/7 2 1 4 3 6 5 0/"
             "4 5 6 7 0 1 2 3/1 0 3 2 5 4 7 6/2 7 4 1 6 3 0 5/3 6 5 0 7 2 1 4")
SQ8_24_M0 = ("4 0 6 3 1 5 7 2/2 7 0 1 3 6 5 4/0 4 7 2 5 1 6 3/3 6 4 0 2 7 1 5/"
             "5 1 2 6 0 4 3 7/7 2 1 5 6 3 4 0/1 5 3 7 4 0 2 6/6 3 5 4 7 2 0 1")
RECT_8x4 = "4 6 1 7/2 0 3 5/0 7 5 6/3 4 2 1/5 2 0 3/7 1 6 4/1 3 4 2/6 5 7 0"

# clusterings of the QPSK map table
C = {
    0: "{(0,1)(1,0)(2,3)(3,2)},{(0,2)(1,3)(2,0)(3,1)},{(0,3)(3,0)(1,2)(2,1)},{(0,0)(1,1)(2,2)(3,3)}",
    1: "{(0,0)(1,3)(2,2)(3,1)},{(0,1)(1,2)(2,3)(3,0)},{(0,2)(3,3)(1,1)(2,0)},{(0,3)(1,0)(2,1)(3,2)}",
    2: "{(0,0)(2,3)(3,1)},{(0,1)(1,3)(2,2)},{(0,2)(1,1)(3,0)},{(0,3)(1,0)(2,1)(3,2)},{(1,2)(2,0)(3,3)}",
    3: "{(0,0)(1,1)(2,2)(3,3)},{(0,1)(1,3)(3,2)},{(0,2)(2,1)(3,0)},{(0,3)(1,2)(2,0)},{(1,0)(2,3)(3,1)}",
    4: "{(0,0)(1,1)(2,2)(3,3)},{(0,1)(2,0)(3,2)},{(0,2)(1,0)(2,3)},{(0,3)(1,2)(3,1)},{(1,3)(2,1)(3,0)}",
    5: "{(0,0)(1,2)(3,1)},{(0,1)(2,0)(3,3)},{(0,2)(1,1)(2,3)},{(0,3)(1,0)(2,1)(3,2)},{(1,3)(2,2)(3,0)}",
    6: "{(0,0)(1,2)(2,1)},{(0,1)(1,0)(3,3)},{(0,2)(1,3)(2,0)(3,1)},{(0,3)(2,2)(3,0)},{(1,1)(2,3)(3,2)}",
    7: "{(0,0)(2,3)(3,2)},{(0,1)(1,0)(2,2)},{(0,2)(1,3)(2,0)(3,1)},{(0,3)(1,1)(3,0)},{(1,2)(2,1)(3,3)}",
    8: "{(0,0)(1,3)(3,2)},{(0,1)(1,2)(2,3)(3,0)},{(0,2)(2,1)(3,3)},{(0,3)(1,1)(2,0)},{(1,0)(2,2)(3,1)}",
    9: "{(0,0)(1,3)(2,1)},{(0,1)(1,2)(2,3)(3,0)},{(0,2)(1,0)(3,3)},{(0,3)(2,2)(3,1)},{(1,1)(2,0)(3,2)}",
}

# QPSK map table: (k1, k2, m) -> acceptable clustering numbers
QPSK_TABLE = {
    (1, 1, 0): {0}, (1, 1, 1): {1}, (1, 1, 2): {0}, (1, 1, 3): {1},
    (1, 2, 0): {2, 3}, (2, 1, 0): {4, 5},
    (1, 2, 1): {6, 5}, (2, 1, 1): {2, 7},
    (1, 2, 2): {7, 8}, (2, 1, 2): {6, 9},
    (1, 2, 3): {4, 9}, (2, 1, 3): {3, 8},
}

# reference constraint lists, keyed by (M, k1, k2, m)
CONSTRAINTS = {
    (4, 1, 1, 0): "{(0,1)(1,0)}; {(0,2)(1,3)(2,0)(3,1)}; {(0,3)(3,0)}; {(1,2)(2,1)}; {(2,3)(3,2)}",
    (4, 1, 1, 1): "{(0,0)(1,3)};{(0,1)(1,2)(2,3)(3,0)}; {(0,2)(3,3)}{(1,1)(2,0)}; {(2,2)(3,1)}",
    (4, 1, 1, 2): "{(0,3)(1,2)}; {(0,0)(1,1)(2,2)(3,3)}; {(0,1)(3,2)}; {(1,0)(2,3)}; {(2,1)(3,0)}",
    (4, 1, 1, 3): "{(0,2)(1,1)}; {(0,3)(1,0)(2,1)(3,2)}; {(0,0)(3,1)}; {(1,3)(2,2)}; {(2,0)(3,3)}",
    (4, 1, 2, 0): "{(0,1)(1,3)};{(0,2)(3,0)};{(1,2)(2,0)};{(2,3)(3,1)}",
    (4, 2, 1, 0): "{(0,1)(2,0)},{(0,2)(2,3)},{(1,2)(3,1)},{(1,3)(3,0)}",
    (4, 1, 2, 1): "{(0,0)(1,2)},{(0,1)(3,3)},{(1,1)(2,3)},{(2,2)(3,0)}",
    (4, 2, 1, 1): "{(0,0)(2,3)},{(0,1)(2,2)},{(1,1)(3,0)},{(1,2)(3,3)}",
    (4, 1, 2, 2): "{(0,0)(3,2)},{(0,3)(1,1)},{(1,0)(2,2)},{(2,1)(3,3)}",
    (4, 2, 1, 2): "{(0,0)(2,1)},{(0,3)(2,2)},{(1,0)(3,3)},{(1,1)(3,2)}",
    (4, 1, 2, 3): "{(0,2)(1,0)},{(0,3)(3,1)},{(1,3)(2,1)},{(2,0)(3,2)}",
    (4, 2, 1, 3): "{(0,2)(2,1)},{(0,3)(2,0)},{(1,0)(3,1)},{(1,3)(3,2)}",
    (8, 1, 3, 0): "{(0,2)(1,7)}, {(0,3)(1,6)}, {(0,5)(7,2)}, {(0,6)(7,1)} {(1,3)(2,0)}, {(1,4)(2,7)}, "
                  "{(2,4)(3,1)}, {(2,5)(3,0)} {(3,5)(4,2)}, {(3,6)(4,1)}, {(4,6)(5,3)}, {(4,7)(5,2)} "
                  "{(5,0)(6,3)}, {(5,7)(6,4)}, {(6,0)(7,5)}, {(6,1)(7,4)}",
    (8, 1, 3, 1): "{(0,1)(1,6)}, {(0,2)(1,5)}, {(0,4)(7,1)}, {(0,5)(7,0)} {(1,2)(2,7)}, {(1,3)(2,6)}, "
                  "{(2,3)(3,0)}, {(2,4)(3,7)} {(3,4)(4,1)}, {(3,5)(4,0)}, {(4,5)(5,2)}, {(4,6)(5,1)} "
                  "{(5,7)(6,2)}, {(5,6)(6,3)}, {(6,7)(7,4)}, {(6,0)(7,3)}",
    (8, 3, 1, 7): "{(1,0)(6,1)}, {(2,0)(5,1)}, {(4,0)(1,7)}, {(5,0)(0,7)} {(2,1)(7,2)}, {(3,1)(6,2)}, "
                  "{(3,2)(0,3)}, {(4,2)(7,3)} {(4,3)(1,4)}, {(5,3)(0,4)}, {(5,4)(2,5)}, {(6,4)(1,5)} "
                  "{(7,5)(2,6)}, {(6,5)(3,6)}, {(7,6)(4,7)}, {(0,6)(3,7)}",
    (8, 2, 4, 0): "{(0,3)(2,7)}, {(0,5)(6,1)}, {(1,4)(3,0)}, {(1,6)(7,2)} {(2,5)(4,1)}, {(3,6)(5,2)}, "
                  "{(4,7)(6,3)}, {(5,0)(7,4)}",
    (8, 2, 4, 2): "{(0,1)(2,5)}, {(0,3)(6,7)}, {(1,2)(3,6)}, {(1,4)(7,0)} {(2,3)(4,7)}, {(3,4)(5,0)}, "
                  "{(4,5)(6,1)}, {(5,6)(7,2)}",
    (8, 4, 2, 6): "{(1,0)(5,2)}, {(3,0)(7,6)}, {(2,1)(6,3)}, {(4,1)(0,7)} {(3,2)(7,4)}, {(4,3)(0,5)}, "
                  "{(5,4)(1,6)}, {(6,5)(2,7)}",
    (8, 1, 4, 0): "{(0,2)(1,6)}, {(0,5)(7,1)}, {(1,3)(2,7)}, {(2,4)(3,0)} {(3,5)(4,1)}, {(4,6)(5,2)}, "
                  "{(5,7)(6,3)}, {(6,0)(7,4)}",
    (8, 1, 2, 0): "{(0,1)(1,7)}, {(0,3)(1,5)}, {(0,4)(7,2)}, {(0,6)(7,0)} {(1,2)(2,0)}, {(1,4)(2,6)}, "
                  "{(2,3)(3,1)}, {(2,5)(3,7)} {(3,4)(4,2)}, {(3,6)(4,0)}, {(4,5)(5,3)}, {(4,7)(5,1)} "
                  "{(5,0)(6,2)}, {(5,6)(6,4)}, {(6,1)(7,3)}, {(6,7)(7,5)}",
    (8, 2, 3, 0): "{(0,2)(2,7)}, {(0,3)(2,6)}, {(0,4)(6,1)}, {(0,5)(6,0)} {(1,3)(3,0)}, {(1,4)(3,7)}, "
                  "{(1,5)(7,2)}, {(1,6)(7,1)} {(2,4)(4,1)}, {(2,5)(4,0)}, {(3,5)(5,2)}, {(3,6)(5,1)} "
                  "{(4,6)(6,3)}, {(4,7)(6,2)}, {(5,0)(7,3)}, {(5,7)(7,4)}",
    (8, 3, 4, 0): "{(0,3)(3,7)}, {(0,4)(5,0)}, {(1,4)(4,0)}, {(1,5)(6,1)} {(2,5)(5,1)}, {(2,6)(7,2)}, "
                  "{(3,6)(6,2)}, {(4,7)(7,3)}",
}
