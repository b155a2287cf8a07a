"""JSON Schemas for CLI output documents."""

_int = {"type": "integer"}
_num = {"type": "number"}
_bool = {"type": "boolean"}
_str = {"type": "string"}


def _obj(props: dict, required=None) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": sorted(required if required is not None else props),
        "additionalProperties": False,
    }


_construction = _obj({"variant": _str, "rule": _str, "bound": _int, "odd_primes_only": _bool, "anchor_count": _int})
_counts = _obj({"crossed": _int, "survivors": _int, "untouched": _int})

SIEVE = _obj(
    {
        "bound": _int,
        "oracle": {"enum": ["classical", "harmonic-case1", "harmonic-case2"]},
        "variant": {"enum": ["full", "odd_only"]},
        "odd_primes_only": _bool,
        "prime_count": _int,
        "max_prime": _int,
        "survivor_count": _int,
        "from_cache": _bool,
        "cache_path": {"type": ["string", "null"]},
        "cache_bytes": {"type": ["integer", "null"]},
    }
)

COMPARE = _obj(
    {
        "bound": _int,
        "left_construction": _construction,
        "right_construction": _construction,
        "crossed_sets_equal": _bool,
        "survivor_sets_equal": _bool,
        "anchor_relation": {"enum": ["equal", "left_subset_of_right", "incomparable"]},
        "first_divergence": {"type": ["integer", "null"]},
        "counts": _obj({"left": _counts, "right": _counts}),
    }
)

VERIFY = _obj(
    {
        "lo": _int,
        "hi": _int,
        "verified_count": _int,
        "failures": {"type": "array", "items": _int},
        "success": _bool,
        "config_fingerprint": {"type": "string", "pattern": "^[0-9a-f]{16}$"},
        "checkpoint_lineage": {
            "type": "array",
            "items": {"type": "array", "items": _int, "minItems": 2, "maxItems": 2},
        },
        "min_representations": {"type": ["integer", "null"]},
        "max_representations": {"type": ["integer", "null"]},
        "wall_time_s": {"type": "number", "minimum": 0},
    }
)

PLOT = _obj({"figures": {"type": "array", "items": _obj({"figure_id": _str, "path": _str, "markers": {"type": "array", "items": _int}})}})

_timing = _obj({"seconds": {"type": "number", "exclusiveMinimum": 0}, "numbers_per_second": {"type": "number", "exclusiveMinimum": 0}, "prime_count": _int})

BENCH = _obj({"bound": _int, "classical": _timing, "harmonic": _timing, "counts_equal": _bool})

COROLLARY = _obj({"samples": _int, "seed": _int, "holds": _bool})

BY_COMMAND = {
    "sieve": SIEVE,
    "compare": COMPARE,
    "verify": VERIFY,
    "plot": PLOT,
    "bench": BENCH,
    "corollary": COROLLARY,
}
