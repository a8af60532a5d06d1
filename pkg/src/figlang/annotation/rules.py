"""Validation rule manifest shared with the annotation front end.

Every server-side validation rule has a stable id; the browser client
registers a matching pre-check per id and the test suites assert set
equality, so the two sides cannot drift apart silently.
"""

RULES = [
    {
        "id": "dms_choice_none_requires_custom_text",
        "stage": "dms_select",
        "description": "Choosing None requires a non-empty custom sentence.",
    },
    {
        "id": "dms_choice_candidate_forbids_custom_text",
        "stage": "dms_select",
        "description": "Choosing one of the four candidates forbids custom text.",
    },
    {
        "id": "verify_verdict_span_must_match_candidate",
        "stage": "verify",
        "description": "Each verdict span must be one of the item's candidate spans.",
    },
    {
        "id": "verify_figurative_requires_category_and_scope",
        "stage": "verify",
        "description": "A span marked figurative needs a category and a scope.",
    },
    {
        "id": "ems_text_required_nonempty",
        "stage": "ems",
        "description": "The equivalent-meaning sentence must be non-empty.",
    },
]

RULE_IDS = [rule["id"] for rule in RULES]
