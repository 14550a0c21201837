import json

import pytest

from fixtures import RECT_8x4, SQ8_24_M0, grid
from pncmaps.constellation import PskConfig
from pncmaps.fades import SingularFade, enumerate_singular_fades, rectangle_singular_fades
from pncmaps.latin import check_exclusive_law
from pncmaps.mapbook import (
    MapBook,
    SeedCounts,
    latin_rectangle,
    rectangle_columns,
    replay,
    seed_count_formulas,
    seed_count_report,
    seed_usage,
    verify,
)
from pncmaps.metrics import removes


@pytest.mark.parametrize("name", ["book2", "book4", "book8"])
def test_books_verify(name, request):
    book = request.getfixturevalue(name)
    rep = verify(book)
    assert rep.ok and not rep.missing
    assert rep.total == len(enumerate_singular_fades(book.cfg))
    assert not book.partial


def test_book_sizes(book2, book4, book8):
    assert len(book2.clusterings) == 1
    assert len(book4.clusterings) == 6
    assert seed_usage(book8) == 7
    assert all(c.n_blocks == 8 for c in book8.clusterings)


def test_fault_injection_is_caught(book8):
    book = MapBook.from_json(book8.to_json())
    f = SingularFade.make(8, 1, 3, 0)
    bad = next(i for i, c in enumerate(book.clusterings) if not removes(c, f))
    book.assignment[f] = bad
    rep = verify(book)
    assert not rep.ok
    assert [c.fade for c in rep.failures()] == [f]
    assert not rep.failures()[0].removed and not rep.failures()[0].replay_ok


def test_missing_fade_is_reported(book4):
    book = MapBook.from_json(book4.to_json())
    f = next(iter(book.assignment))
    del book.assignment[f]
    rep = verify(book)
    assert rep.missing == [f] and not rep.ok


def test_json_round_trip(book8, tmp_path):
    doc = json.loads(book8.dumps())
    assert set(doc) == {"m", "clusterings", "assignment", "seeds", "failed_circles"}
    path = tmp_path / "book.json"
    book8.save(path)
    again = MapBook.load(path)
    assert again.clusterings == book8.clusterings
    assert again.assignment == book8.assignment
    assert again.provenance == book8.provenance
    assert verify(again).ok


def test_replay_every_fade(book8):
    for f in book8.assignment:
        assert replay(book8, f) == book8.clustering_of(f)


@pytest.mark.parametrize("m,expected", [(8, SeedCounts(2, 3, 7)), (16, SeedCounts(7, 19, 26)),
                                         (32, SeedCounts(29, 99, 100))])
def test_seed_count_closed_forms(m, expected):
    assert seed_count_formulas(m) == expected
    assert seed_count_report(PskConfig(m)) == expected


def test_rectangle_from_reference_square():
    f = SingularFade.make(8, 2, 4, 0)
    rect = latin_rectangle(grid(SQ8_24_M0), f, 4, 0)
    assert rect == grid(RECT_8x4, 8)
    assert rectangle_columns(8, 4) == [0, 2, 4, 6]


def test_rectangles_from_book(book8):
    cfg = PskConfig(8)
    for offset in (0, 1):
        keep = rectangle_columns(8, 4, offset)
        fades = rectangle_singular_fades(cfg, keep)
        assert fades
        for f in fades:
            rect = latin_rectangle(book8.grid(book8.assignment[f]), f, 4, offset)
            assert rect.shape == (8, 4) and check_exclusive_law(rect)


def test_rectangle_rejects_bad_input(book8):
    sq = grid(SQ8_24_M0)
    with pytest.raises(ValueError):
        latin_rectangle(sq, SingularFade.make(8, 2, 4, 0), 3)
    odd = SingularFade.make(8, 1, 3, 0)
    if odd not in rectangle_singular_fades(PskConfig(8), [0, 2, 4, 6]):
        with pytest.raises(ValueError):
            latin_rectangle(sq, odd, 4)
