"""Deterministic builder for the shipped reference annotation dataset.

The reference file mirrors the published dataset's shape: 1661 annotated
sentences (752 with metaphors, 909 with idioms) carrying 1741 unique
figurative expressions (445 SE-specific, 1296 general), every item fully
selected or adjudicated so triplet construction yields 3322 records. Texts
are synthetic; counts, spans, and workflow state are exact and the builder
asserts every target before returning.
"""

from __future__ import annotations

import random

from figlang.figdata.model import AnnotatedSentence, FigurativeExpression
from figlang.prevalence.normalize import normalize_expression

N_SENTENCES = 1661
N_METAPHOR = 752
N_IDIOM = 909
N_UNIQUE = 1741
N_SE = 445
N_GENERAL = 1296

_SE_ADJS = (
    "ghost", "dead", "magic", "nasty", "hidden", "silent", "frozen", "sticky",
    "rogue", "phantom", "zombie", "orphan", "stale", "brittle", "toxic",
    "leaky", "fragile", "haunted", "wild", "sleepy", "greedy", "noisy",
    "shadow", "cold", "hollow",
)
_SE_NOUNS = (
    "bug", "fork", "monitor", "pipeline", "branch", "cache", "thread",
    "daemon", "socket", "kernel", "patch", "commit", "registry", "sandbox",
    "compiler", "heap", "mutex", "router", "scheduler", "container",
)
_GEN_ADJS = (
    "long", "gray", "uphill", "slippery", "golden", "bitter", "sweet",
    "rocky", "thorny", "foggy", "stormy", "sour", "shiny", "rusty",
    "crooked", "narrow", "twisted", "heavy", "gentle", "fierce", "velvet",
    "marble", "copper", "scarlet", "gloomy", "cheerful", "distant",
    "ancient", "modern", "quiet", "loud", "smooth", "rough", "deep",
    "shallow", "bright", "dark", "pale", "vivid", "crimson",
)
_GEN_NOUNS = (
    "road", "battle", "storm", "bridge", "garden", "ladder", "mountain",
    "river", "candle", "mirror", "blanket", "anchor", "compass", "lantern",
    "feather", "ribbon", "saddle", "harbor", "meadow", "tunnel", "castle",
    "violin", "trumpet", "basket", "bucket", "hammer", "needle", "carpet",
    "curtain", "pillow", "beacon", "marsh", "orchard", "quarry", "lagoon",
    "plateau",
)

_SINGLE_TEMPLATES = (
    "Honestly, the {a} in this module keeps wrecking our nightly builds.",
    "I believe we tripped over another {a} while reviewing the migration yesterday.",
    "This change behaves like a {a} that will bite us during release week.",
    "Could someone document the {a} before we cut the next release train?",
    "After the rebase, that {a} showed up in every failing integration test.",
    "Reviewers flagged a {a} lurking inside the callback chain again.",
    "Our CI went red because of the {a} sitting in the storage layer.",
    "Nobody volunteers to debug the {a} living inside this legacy parser.",
)
_DOUBLE_TEMPLATES = (
    "The {a} and the {b} together made this incident brutal to triage.",
    "Between the {a} and the {b}, the sprint review collapsed into confusion.",
    "We traced the outage to a {a} colliding with a {b} downstream.",
    "That {a} plus the old {b} kept the maintainers awake all night.",
)
_GLOSSES = (
    "recurring defect", "misleading warning", "unstable component", "confusing workaround",
    "slow regression", "awkward dependency", "unclear failure", "stubborn misconfiguration",
    "fragile integration", "puzzling timeout", "overlooked regression", "messy refactor",
)
_REPLACEMENTS = ("quarterly report", "team offsite", "budget spreadsheet", "lunch order")

_REPOS = (
    "acme/rocket", "umbrella/console", "initech/printer", "hooli/boxes",
    "globex/atlas", "wayne/ledger", "stark/forge", "wonka/tickets", "tyrell/mirror",
)


def _surface_pool(adjs: tuple[str, ...], nouns: tuple[str, ...], limit: int) -> list[str]:
    pool = [f"{adj} {noun}" for adj in adjs for noun in nouns][:limit]
    keys = {normalize_expression(s) for s in pool}
    if len(keys) != len(pool):
        raise AssertionError("surface pool collides after normalization")
    return pool


def build_reference_dataset(seed: int = 20240501) -> list[AnnotatedSentence]:
    """Construct the full reference dataset; deterministic for a fixed seed."""
    rng = random.Random(seed)
    se_unique = _surface_pool(_SE_ADJS, _SE_NOUNS, N_SE)
    gen_unique = _surface_pool(_GEN_ADJS, _GEN_NOUNS, N_GENERAL)
    if {normalize_expression(s) for s in se_unique} & {normalize_expression(s) for s in gen_unique}:
        raise AssertionError("SE and general pools overlap after normalization")

    # Instance queues: every general surface occurs once; the overflow of
    # SE instances over unique SE surfaces repeats the head of the pool.
    spec_rows: list[tuple[str, str]] = []
    spec_rows += [("metaphor", "se")] * 168
    spec_rows += [("metaphor", "gen")] * 531
    spec_rows += [("metaphor", "gen2")] * 3
    spec_rows += [("metaphor", "both")] * 50
    spec_rows += [("idiom", "se")] * 203
    spec_rows += [("idiom", "gen")] * 642
    spec_rows += [("idiom", "gen2")] * 3
    spec_rows += [("idiom", "both")] * 61
    n_se_instances = sum(1 for _, kind in spec_rows if kind in ("se", "both"))
    se_queue = list(se_unique) + list(se_unique[: n_se_instances - len(se_unique)])
    gen_queue = list(gen_unique)
    rng.shuffle(se_queue)
    rng.shuffle(gen_queue)

    items: list[AnnotatedSentence] = []
    se_i = gen_i = 0
    for index, (category, kind) in enumerate(spec_rows):
        if kind == "se":
            surfaces = [(se_queue[se_i], "se_specific")]
            se_i += 1
        elif kind == "gen":
            surfaces = [(gen_queue[gen_i], "general")]
            gen_i += 1
        elif kind == "gen2":
            surfaces = [(gen_queue[gen_i], "general"), (gen_queue[gen_i + 1], "general")]
            gen_i += 2
        else:  # both
            surfaces = [(se_queue[se_i], "se_specific"), (gen_queue[gen_i], "general")]
            se_i += 1
            gen_i += 1

        if len(surfaces) == 1:
            template = _SINGLE_TEMPLATES[index % len(_SINGLE_TEMPLATES)]
            original = template.format(a=surfaces[0][0])
        else:
            template = _DOUBLE_TEMPLATES[index % len(_DOUBLE_TEMPLATES)]
            original = template.format(a=surfaces[0][0], b=surfaces[1][0])

        expressions = []
        for surface, scope in surfaces:
            if original.count(surface) != 1:
                raise AssertionError(f"surface {surface!r} not unique in {original!r}")
            start = original.index(surface)
            expressions.append(
                FigurativeExpression(
                    surface=surface,
                    span=(start, start + len(surface)),
                    category=category,
                    scope=scope,
                    verified=True,
                )
            )

        gloss = _GLOSSES[index % len(_GLOSSES)]
        ems = original
        for surface, _ in surfaces:
            ems = ems.replace(surface, gloss)
        primary = surfaces[0][0]
        candidates = [
            f"A literal {primary} stood on the shelf beside the release posters.",
            f"They photographed the {primary} for the onboarding brochure cover.",
            original.replace(primary, _REPLACEMENTS[index % len(_REPLACEMENTS)]),
            original.replace(primary, _REPLACEMENTS[(index + 1) % len(_REPLACEMENTS)]),
        ]
        choice_slot = index % 9
        if choice_slot == 8:
            dms_choice = "none_custom"
            dms = f"Someone mailed us a {primary} sticker, which was a strange gift."
        else:
            pick = choice_slot // 2
            dms_choice = f"c{pick + 1}"
            dms = candidates[pick]
        status = "adjudicated" if index % 13 in (0, 1) else "dms_selected"

        items.append(
            AnnotatedSentence(
                id=f"fig-{index + 1:04d}",
                original=original,
                expressions=expressions,
                ems=ems,
                dms=dms,
                dms_candidates=candidates,
                dms_choice=dms_choice,
                status=status,
                provenance={
                    "repo_slug": _REPOS[index % len(_REPOS)],
                    "comment_id": f"c{100000 + index}",
                    "kind": "issue" if index % 2 == 0 else "pull_request",
                },
            )
        )

    _check_targets(items)
    return items


def _check_targets(items: list[AnnotatedSentence]) -> None:
    from figlang.figdata.summary import dataset_stats

    stats = dataset_stats(items)
    targets = {
        "n_sentences": N_SENTENCES,
        "n_metaphor_sentences": N_METAPHOR,
        "n_idiom_sentences": N_IDIOM,
        "n_unique_expressions": N_UNIQUE,
        "n_se_specific": N_SE,
        "n_general": N_GENERAL,
        "n_rejected": 0,
    }
    actual = stats.to_dict()
    for key, expected in targets.items():
        if actual[key] != expected:
            raise AssertionError(f"reference dataset {key}={actual[key]}, expected {expected}")
    for item in items:
        if item.dms in (item.original, item.ems):
            raise AssertionError(f"degenerate DMS for {item.id}")
