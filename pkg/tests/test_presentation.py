import pytest

from core.groups.presentation import (
    Letter,
    abelianization,
    bridson_presentation,
    cyclic_conjugates,
    free_reduce,
    inverse,
    is_null_homotopic_bounded,
    is_reduced,
    parse_presentation,
    parse_word,
    render_presentation,
    render_word,
    triangularize,
    z2_presentation,
)
from core.utils.error_handler import PresentationParseError


def test_parse_z2(z2):
    assert z2.names == ('a', 'b')
    assert z2.relators == (parse_word('abAB', ['a', 'b']),)
    assert z2.max_relator_length == 4
    assert not z2.is_triangular()


def test_word_letters_and_render():
    word = parse_word('aT1b', ['a', 'b', 't1'])
    assert word == (Letter(0, 1), Letter(2, -1), Letter(1, 1))
    assert render_word(word, ['a', 'b', 't1']) == 'aT1b'
    assert render_word(inverse(word), ['a', 'b', 't1']) == 'Bt1A'


def test_comments_and_blank_lines():
    p = parse_presentation("# header\n\ngens: x y  # two\nrel: xyXY\n")
    assert p.names == ('x', 'y')
    assert len(p.relators) == 1


@pytest.mark.parametrize('text', [
    "rel: ab\ngens: a b\n",
    "gens: a b\nrel: ac\n",
    "gens: a b\ngens: c\n",
    "gens: a b\nrel:\n",
    "gens: a a\n",
    "rel ab\n",
    "",
])
def test_malformed_presentations(text):
    with pytest.raises(PresentationParseError):
        parse_presentation(text)


def test_parse_error_reports_line():
    with pytest.raises(PresentationParseError) as info:
        parse_presentation("gens: a b\nrel: ab\nrel: a?b\n")
    assert info.value.line == 3
    assert info.value.position == 1


def test_free_reduce_keeps_ends():
    w = parse_word('aAbaBBb', ['a', 'b'])
    assert render_word(free_reduce(w), ['a', 'b']) == 'baB'
    # no cyclic reduction
    assert render_word(free_reduce(parse_word('abA', ['a', 'b'])), ['a', 'b']) == 'abA'
    assert is_reduced(parse_word('abA', ['a', 'b']))
    assert not is_reduced(w)


def test_cyclic_conjugates_of_commutator(z2):
    conjugates = cyclic_conjugates(z2.relators[0])
    rendered = {render_word(c, z2) for c in conjugates}
    assert rendered == {'abAB', 'bABa', 'ABab', 'BabA', 'baBA', 'aBAb', 'BAba', 'AbaB'}


def test_cyclic_conjugates_deduplicate():
    conjugates = cyclic_conjugates(parse_word('aaa', ['a']))
    assert len(conjugates) == 2


def test_abelianization():
    assert abelianization(parse_word('abAB', ['a', 'b']), 2) == (0, 0)
    assert abelianization(parse_word('aaB', ['a', 'b']), 2) == (2, -1)


def test_triangularize_z2(z2, z2_tri):
    result = triangularize(z2)
    assert result.names == ('a', 'b', 't1')
    assert [render_word(r, result) for r in result.relators] == ['T1ab', 't1AB']
    assert result == z2_tri


def test_triangularize_is_identity_on_triangular(z2_tri):
    assert triangularize(z2_tri) == z2_tri


def test_triangularize_power_relator():
    p = parse_presentation("gens: a\nrel: aaaa\n")
    result = triangularize(p)
    assert [render_word(r, result) for r in result.relators] == ['T1aa', 't1aa']


def test_triangularize_counts_and_fresh_names():
    p = parse_presentation("gens: a t1\nrel: at1at1a\n")
    result = triangularize(p)
    assert result.rank == 2 + 2
    assert len(result.relators) == 3
    assert 't2' in result.names and 't3' in result.names
    assert result.is_triangular()


def test_render_round_trip(z2_tri):
    text = render_presentation(z2_tri, header=['command=triangulate seed=0'])
    assert text.startswith('# command=triangulate seed=0\n')
    assert parse_presentation(text) == z2_tri


def test_bridson_gamma1_matches_sample(samples_dir):
    from core.groups.presentation import load_presentation
    sample = load_presentation(samples_dir / 'bridson_gamma1.pres')
    assert bridson_presentation(1) == sample
    tri = triangularize(sample)
    assert tri.is_triangular()
    assert tri.rank == 4 + 1 + 1 + 3


def test_bridson_gamma2_relators():
    p = bridson_presentation(2)
    assert p.names == ('a1', 'a2', 's', 't', 'u')
    rendered = [render_word(r, p) for r in p.relators]
    assert rendered[0] == 'Sa1sA2'
    assert 'UTA2ua2t' in rendered
    assert len(rendered) == len(set(rendered))


def test_null_homotopy_after_triangularizing():
    z2_tri = triangularize(z2_presentation())
    witness = is_null_homotopic_bounded(z2_tri, parse_word('abAB', z2_tri), 2)
    assert witness is not None
    assert witness.area == 2
    assert is_null_homotopic_bounded(z2_tri, parse_word('ab', z2_tri), 4) is None
