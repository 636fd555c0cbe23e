"""Recipe transcription and wet-lab signatures."""

from __future__ import annotations

import pytest

from twoqfa.chem import (
    ReactionSystem,
    Recipe,
    RecipeError,
    parse_recipe,
    signature,
    transcribe,
)
from twoqfa.core import RunResult, run
from twoqfa.errors import AlphabetError
from twoqfa.machines import build_m2


def test_precipitation_aliquots_map_to_letters():
    recipe = Recipe(ReactionSystem.PRECIPITATION, ("KIO3", "KIO3", "AgNO3"))
    assert transcribe(recipe) == "aab"


def test_bz_aliquots_map_to_letters():
    recipe = Recipe(
        ReactionSystem.BZ,
        ("BrO3-", "bromate", "malonic acid", "MA", "NaOH", "sodium hydroxide"),
    )
    assert transcribe(recipe) == "aabbcc"


def test_unicode_superscript_minus_is_accepted():
    recipe = Recipe(ReactionSystem.BZ, ("BrO3⁻",))
    assert transcribe(recipe) == "a"


def test_empty_recipe_transcribes_to_the_empty_word():
    assert transcribe(Recipe(ReactionSystem.ACID_BASE, ())) == ""


def test_transcription_is_a_homomorphism():
    first = Recipe(ReactionSystem.BZ, ("BrO3-", "MA"))
    second = Recipe(ReactionSystem.BZ, ("NaOH", "bromate"))
    combined = Recipe(ReactionSystem.BZ, first.aliquots + second.aliquots)
    assert transcribe(combined) == transcribe(first) + transcribe(second)


def test_unknown_species_names_the_aliquot():
    recipe = Recipe(ReactionSystem.PRECIPITATION, ("KIO3", "vinegar"))
    with pytest.raises(RecipeError, match="aliquot 2"):
        transcribe(recipe)


def test_species_do_not_cross_systems():
    with pytest.raises(RecipeError):
        transcribe(Recipe(ReactionSystem.PRECIPITATION, ("NaOH",)))


def test_parse_recipe_with_comments_and_blanks():
    text = """
    ; morning batch
    system: acid-base

    malonic acid
    ; stir before the next step
    NaOH
    """
    recipe = parse_recipe(text)
    assert recipe.system is ReactionSystem.ACID_BASE
    assert recipe.aliquots == ("malonic acid", "NaOH")
    assert transcribe(recipe) == "()"


def test_parse_recipe_bare_header():
    recipe = parse_recipe("BZ\nbromate\n")
    assert recipe.system is ReactionSystem.BZ


def test_parse_recipe_requires_a_known_system():
    with pytest.raises(RecipeError):
        parse_recipe("system: alchemy\nlead\n")
    with pytest.raises(RecipeError):
        parse_recipe("; only a comment\n")


def test_signature_descriptors_cover_both_outcomes():
    machine = build_m2(5)
    balanced = parse_recipe("acid-base\nmalonic acid\nNaOH\n")
    accept = signature(balanced.system, run(machine, transcribe(balanced)))
    assert accept.verdict == "accept"
    assert accept.descriptor == "lightest gray tone"
    assert accept.p_accept >= 1 - 1e-6

    lopsided = parse_recipe("acid-base\nmalonic acid\n")
    reject = signature(lopsided.system, run(machine, transcribe(lopsided)))
    assert reject.verdict == "reject"
    assert reject.descriptor == "darkest gray tone"


def test_signature_uses_each_systems_vocabulary(m1, m3_5):
    def observe(machine, text):
        recipe = parse_recipe(text)
        return signature(recipe.system, run(machine, transcribe(recipe)))

    observed = observe(m1, "precipitation\nAgNO3\nKIO3\n")
    assert observed.verdict == "accept"
    assert observed.descriptor == "AgIO3 precipitate present"

    cleared = observe(m1, "precipitation\nAgNO3\n")
    assert cleared.descriptor == "solution clear"

    oscillating = observe(m3_5, "BZ\nbromate\nMA\nNaOH\n")
    assert oscillating.verdict == "accept"
    assert oscillating.descriptor == "sustained color oscillations"

    still = observe(m3_5, "BZ\nNaOH\nMA\nbromate\n")
    assert still.descriptor == "no sustained oscillation"


def test_signature_flags_unfinished_runs(m3_5):
    recipe = parse_recipe("BZ\nbromate\nMA\nNaOH\n")
    probed = signature(
        recipe.system, run(m3_5, transcribe(recipe), max_steps=3)
    )
    assert probed.descriptor.startswith("indeterminate (residual mass")
    assert probed.verdict == "reject"


def test_signature_threshold_is_strict():
    split = RunResult(
        p_accept=0.5, p_reject=0.5, p_residual=0.0, steps=7, halted=True
    )
    assert signature(ReactionSystem.BZ, split).verdict == "reject"
    tipped = RunResult(
        p_accept=0.5 + 1e-9, p_reject=0.5 - 1e-9, p_residual=0.0, steps=7, halted=True
    )
    assert signature(ReactionSystem.BZ, tipped).verdict == "accept"


def test_recipe_alphabet_must_match_the_machine(m1):
    recipe = parse_recipe("BZ\nNaOH\n")
    with pytest.raises(AlphabetError):
        run(m1, transcribe(recipe))
