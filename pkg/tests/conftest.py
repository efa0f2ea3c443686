"""Shared fixtures: a 12-category toy taxonomy, relation fixtures, lemma table."""

from __future__ import annotations

import io

import pytest

from gazex import FixtureProvider, RelationId, parse_taxonomy
from gazex.taxonomy import LemmaTable

TOY_TAXONOMY_TEXT = """\
# toy commercial taxonomy: 2 parents x [3, 9] categories
Food\tCake Shop
Food\tBeverage Store
Food\tBar
Shopping\tBook Store
Shopping\tFlower Shop
Shopping\tShoe Store
Shopping\tToy Store
Shopping\tMusic Store
Shopping\tJewelry Store
Shopping\tPet Store
Shopping\tArt Gallery
Shopping\tHardware Store
"""

# relation<TAB>term<TAB>topic<TAB>word<TAB>score; SYN and TRG carry the terms
# that match the evaluation queries, a few relations stay empty on purpose.
TOY_FIXTURES_TEXT = """\
SYN\tCake Shop\tFood\tpastry\t90
SYN\tCake Shop\tFood\tbakery\t80
SYN\tBeverage Store\tFood\tdrink shop\t70
SYN\tBar\tFood\tpub\t95
SYN\tFlower Shop\tShopping\tflorist\t88
SYN\tBook Store\tShopping\tbookseller\t82
TRG\tCake Shop\tFood\tbirthday cake\t60
TRG\tCake Shop\tFood\tfrosting\t40
TRG\tBar\tFood\tcocktail\t75
TRG\tPet Store\tShopping\tpuppies\t66
TRG\tJewelry Store\tShopping\trings\t58
BGA\tBook Store\tShopping\tshelf\t20
BGB\tMusic Store\tShopping\trecord\t25
GEN\tShoe Store\tShopping\tfootwear outlet\t30
JJA\tToy Store\tShopping\tplayful\t15
JJB\tArt Gallery\tShopping\tmodern\t12
SPC\tHardware Store\tShopping\ttool depot\t22
"""

LEMMA_TEXT = """\
pastries\tpastry
cakes\tcake
buying\tbuy
flowers\tflower
rings\tring
shops\tshop
shoes\tshoe
puppies\tpuppy
"""

# 16 queries: baseline finds 5 TPs by pattern matching, SYN/TRG/BGB recover
# the FNs, q15 stays a false positive and q09 is excluded from the counts.
TOY_TRUTH_TEXT = """\
q01\twhere can i buy a cake\tFood\tCake Shop
q02\twhere to find fresh pastries\tFood\tCake Shop
q03\tbuy rings for a wedding\tShopping\tJewelry Store
q04\thistory of ancient rome\tNONE\tNONE
q05\twhere can i buy a puppy\tShopping\tPet Store
q06\tcocktail recipes\tFood\tBar
q07\topen a book store downtown\tShopping\tBook Store
q08\tflorist with roses\tShopping\tFlower Shop
q09\tweird gibberish zzz\tNOT_AN_ANSWER\tNOT_AN_ANSWER
q10\tbuy cake near bar\tFood\tCake Shop
q11\tpurchase a record player\tShopping\tMusic Store
q12\tpub crawl tonight\tFood\tBar
q13\tfresh flowers downtown\tShopping\tFlower Shop
q14\tcheap shoes online\tShopping\tShoe Store
q15\tmisleading cake question\tShopping\tBook Store
q16\twhere to find a good pub\tFood\tBar
"""


@pytest.fixture(scope="session")
def toy_taxonomy():
    return parse_taxonomy(io.StringIO(TOY_TAXONOMY_TEXT))


@pytest.fixture(scope="session")
def toy_fixtures(tmp_path_factory):
    path = tmp_path_factory.mktemp("fixtures") / "relations.tsv"
    path.write_text(TOY_FIXTURES_TEXT, encoding="utf-8")
    return FixtureProvider(path)


@pytest.fixture(scope="session")
def toy_lemmas(tmp_path_factory):
    path = tmp_path_factory.mktemp("lemmas") / "lemmas.tsv"
    path.write_text(LEMMA_TEXT, encoding="utf-8")
    return LemmaTable.load(path)


@pytest.fixture(scope="session")
def toy_truth():
    from gazex.evaluation import parse_ground_truth

    return parse_ground_truth(io.StringIO(TOY_TRUTH_TEXT))


@pytest.fixture(scope="session")
def all_relations():
    return list(RelationId)


# -- acceptance reporting -------------------------------------------------

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    outcome = "PASS" if report.passed else "FAIL"
    _ACCEPTANCE_RESULTS.append((outcome, report.nodeid.split("::")[-1]))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for outcome, name in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{outcome}] {name}")
