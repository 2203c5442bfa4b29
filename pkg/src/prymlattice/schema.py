"""JSON schemas for the cover input document and the report output document."""

COVER_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "cover document",
    "type": "object",
    "required": ["group", "branch_points"],
    "additionalProperties": False,
    "properties": {
        "group": {
            "type": "object",
            "required": ["invariant_factors"],
            "additionalProperties": False,
            "properties": {
                "invariant_factors": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 2},
                }
            },
        },
        "branch_points": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["monodromy"],
                "additionalProperties": False,
                "properties": {
                    "monodromy": {"type": "array", "items": {"type": "integer"}},
                },
            },
        },
        "label": {"type": ["string", "null"]},
    },
}

REPORT_SCHEMA_ID = "prymlattice.report/1"

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "report document",
    "type": "object",
    "required": ["schema", "command", "input", "status", "violations", "result", "error"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": REPORT_SCHEMA_ID},
        "command": {
            "enum": [
                "validate",
                "genus",
                "eigenspaces",
                "homology",
                "prym",
                "verify",
                "product",
                "rank-bound",
            ]
        },
        "input": {
            "type": "object",
            "required": ["source"],
            "properties": {
                "source": {"type": "string"},
                "document": {"type": ["object", "null"]},
                "options": {"type": "object"},
            },
        },
        "status": {"enum": ["ok", "invalid", "error", "failed"]},
        "violations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "index", "message"],
                "properties": {
                    "kind": {"type": "string"},
                    "index": {"type": ["integer", "null"]},
                    "message": {"type": "string"},
                },
            },
        },
        "result": {"type": ["object", "null"]},
        "error": {"type": ["string", "null"]},
    },
}

BATCH_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "array",
    "items": REPORT_SCHEMA,
}
