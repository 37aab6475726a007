ORDER_SPEC = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Order Spec",
    "description": "A linear order on the integer lattice Z^n",
    "type": "object",
    "properties": {
        "kind": {"type": "string", "enum": ["lex", "functional"]},
        "n": {"type": "integer", "minimum": 1},
        "alpha": {"type": "array", "items": {"type": "number"}, "minItems": 1},
    },
    "required": ["kind", "n"],
    "additionalProperties": False,
    "if": {"properties": {"kind": {"const": "functional"}}},
    "then": {"required": ["alpha"]},
    "else": {"not": {"required": ["alpha"]}},
}

SYMBOL_FILE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Symbol File",
    "description": "Sparse Fourier coefficients of a trigonometric polynomial on T^n",
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "terms": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "k": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
                    "re": {"type": "number"},
                    "im": {"type": "number"},
                },
                "required": ["k", "re", "im"],
                "additionalProperties": False,
            },
        },
    },
    "required": ["n", "terms"],
    "additionalProperties": False,
}

RUN_CONFIG = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Run Config",
    "description": "Settings for a norm computation or verification run",
    "type": "object",
    "properties": {
        "order": {
            "type": "object",
            "properties": ORDER_SPEC["properties"],
            "required": ["kind"],
            "additionalProperties": False,
        },
        "grid": {"type": "integer", "minimum": 2},
        "box": {"type": "integer", "minimum": 1},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "iters": {"type": "integer", "minimum": 1},
        "solver_iters": {"type": "integer", "minimum": 0},
        "slack": {"type": "number", "minimum": 0},
        "seed": {"type": "integer", "minimum": 0},
        "corpus_size": {"type": "integer", "minimum": 1},
        "output": {"type": ["string", "null"]},
        "format": {"type": "string", "enum": ["json", "csv", "text"]},
    },
    "additionalProperties": False,
}
