"""The hll-config/1 JSON format.

A config lists places; each place carries its local field, quadratic algebra,
character and idele component.  beta (and optionally eta) give one local
element per place label.  Elements are {"val": v, "unit": [...]},
{"rational": [num, den]} or {"zero": true}.  See README for a full example.
"""
from __future__ import annotations

import json
from fractions import Fraction

import jsonschema

from .assembly import BetaDatum, PlaceConfig, SemiLocalConfig, embedding_for
from .characters import MulChar, SplitChar
from .errors import SchemaError
from .localfield import LocalElement, LocalFieldDesc, QuadExtDesc

SCHEMA_ID = "hll-config/1"

_elem = {
    "type": "object",
    "oneOf": [
        {"required": ["val", "unit"]},
        {"required": ["rational"]},
        {"required": ["zero"]},
    ],
    "properties": {
        "val": {"type": "integer"},
        "unit": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
        "prec": {"type": "integer", "minimum": 1},
        "rational": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2},
        "zero": {"const": True},
    },
    "additionalProperties": False,
}

_root = {"type": "object", "required": ["zeta_pow", "order"],
         "properties": {"zeta_pow": {"type": "integer"}, "order": {"type": "integer", "minimum": 1},
                        "ell_half_power": {"type": "integer"}},
         "additionalProperties": False}

_mulchar = {
    "type": "object",
    "required": ["level", "unit_images"],
    "properties": {
        "level": {"type": "integer", "minimum": 0},
        "a": {"type": "integer", "minimum": 0},
        "unit_images": {"type": "array", "items": _root},
        "uniformizer_value": _root,
    },
    "additionalProperties": False,
}

_char = {"oneOf": [
    _mulchar,
    {"type": "object", "required": ["w", "wbar"],
     "properties": {"w": _mulchar, "wbar": _mulchar}, "additionalProperties": False},
]}

_field = {
    "type": "object",
    "required": ["ell"],
    "properties": {
        "ell": {"type": "integer", "minimum": 3},
        "f": {"type": "integer", "minimum": 1},
        "n_max": {"type": "integer", "minimum": 2},
        "lift_poly": {"type": "array", "items": {"type": "integer"}},
        "d_F": {"type": "array", "items": {"type": "integer"}},
    },
    "additionalProperties": False,
}

_algebra = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["split", "inert", "ramified"]},
        "theta_sq": {"type": "array", "items": {"type": "integer"}},
        "lam": {"type": "object", "properties": {"val": {"type": "integer"},
                                                 "unit": {"type": "array", "items": {"type": "integer"}}},
                "additionalProperties": False},
        "vartheta_w": {"type": "object", "properties": {"val": {"type": "integer"},
                                                        "unit": {"type": "array", "items": {"type": "integer"}}},
                       "additionalProperties": False},
    },
    "additionalProperties": False,
}

_place = {
    "type": "object",
    "required": ["label", "kind", "field", "E", "chi"],
    "properties": {
        "label": {"type": "string", "minLength": 1},
        "kind": {"enum": ["spherical", "split_plus", "big_cell_l", "ramified_Cminus",
                          "inert_Cminus", "R_prime"]},
        "field": _field,
        "E": _algebra,
        "chi": _char,
        "c_v": _elem,
        "v_cR": {"type": "integer"},
    },
    "additionalProperties": False,
}

_fraction = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "places"],
    "properties": {
        "schema": {"const": SCHEMA_ID},
        "places": {"type": "array", "items": _place, "minItems": 1, "maxItems": 8},
        "weight": {"type": "integer", "minimum": 1},
        "global_norm_factor": _fraction,
        "arch_sign": {"enum": [1, -1]},
        "beta": {"type": "object", "additionalProperties": _elem},
        "beta_norm": _fraction,
        "eta": {"type": "object", "additionalProperties": _elem},
        "embedding": {
            "type": "object",
            "required": ["p"],
            "properties": {"p": {"type": "integer", "minimum": 3}, "seed": {"type": "integer"},
                           "allow_wild": {"type": "boolean"},
                           "psi_depth": {"type": "integer", "minimum": 0}},
            "additionalProperties": False,
        },
        "query": {
            "type": "object",
            "properties": {
                "place": {"type": "string"},
                "M": {"type": "integer", "minimum": 0},
                "s": _fraction,
                "character": {"enum": ["chi", "chi_star", "chi_plus", "chi_plus_abs_inv"]},
                "method": {"enum": ["bruteforce", "closed", "both"]},
                "bound": {"type": "integer", "minimum": 0},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}


def validate(obj):
    try:
        jsonschema.validate(obj, SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SchemaError(f"config invalid at '{path}': {exc.message}") from None


def _field_of(obj) -> LocalFieldDesc:
    return LocalFieldDesc(obj["ell"], obj.get("f", 1), obj.get("n_max", 12),
                          tuple(obj["lift_poly"]) if "lift_poly" in obj else None,
                          tuple(obj["d_F"]) if "d_F" in obj else None)


def _algebra_of(F, obj) -> QuadExtDesc:
    lam = obj.get("lam", {})
    vw = obj.get("vartheta_w")
    return QuadExtDesc(F, obj["kind"], tuple(obj["theta_sq"]) if "theta_sq" in obj else None,
                       lam.get("val", 0), tuple(lam["unit"]) if "unit" in lam else None,
                       (vw.get("val", 0), tuple(vw["unit"])) if vw else None)


def char_of(E: QuadExtDesc, obj):
    if "w" in obj:
        if E.kind != "split":
            raise SchemaError("a character pair needs a split algebra")
        return SplitChar(E, MulChar.from_json(E.base, obj["w"]), MulChar.from_json(E.base, obj["wbar"]))
    if E.kind == "split":
        raise SchemaError("split algebras need a character pair {w, wbar}")
    return MulChar.from_json(E, obj)


def elem_of(F, obj) -> LocalElement:
    return LocalElement.from_json(F, obj)


def place_of(obj) -> PlaceConfig:
    F = _field_of(obj["field"])
    E = _algebra_of(F, obj["E"])
    chi = char_of(E, obj["chi"])
    c_v = elem_of(F, obj["c_v"]) if "c_v" in obj else None
    return PlaceConfig(obj["label"], obj["kind"], E, chi, c_v, obj.get("v_cR"))


class LoadedConfig:
    """Parsed config: places keyed by label plus the optional beta / eta / query."""

    def __init__(self, obj, p_override=None, seed_override=None):
        validate(obj)
        self.raw = obj
        self.places = [place_of(o) for o in obj["places"]]
        self.by_label = {p.label: p for p in self.places}
        if len(self.by_label) != len(self.places):
            raise SchemaError("place labels must be distinct")
        self.beta = self._elements(obj.get("beta", {}))
        self.eta = self._elements(obj.get("eta", {}))
        self.query = obj.get("query", {})
        self.weight = obj.get("weight", 1)
        self.norm_factor = Fraction(str(obj.get("global_norm_factor", 1)))
        self.beta_norm = Fraction(str(obj["beta_norm"])) if "beta_norm" in obj else None
        self.arch_sign = obj.get("arch_sign", 1)
        emb = dict(obj.get("embedding", {}))
        if p_override is not None:
            emb["p"] = p_override
        if seed_override is not None:
            emb["seed"] = seed_override
        self.emb_params = emb if "p" in emb else None

    def _elements(self, d):
        out = {}
        for label, e in d.items():
            if label not in self.by_label:
                raise SchemaError(f"element given for unknown place {label!r}")
            out[label] = elem_of(self.by_label[label].F, e)
        return out

    def semilocal(self) -> SemiLocalConfig:
        cfg = SemiLocalConfig(self.places, self.weight, self.norm_factor, None, self.arch_sign)
        if self.emb_params:
            cfg.emb = self.embedding(cfg.ell_l, cfg)
        return cfg

    def embedding(self, ell: int, source):
        if not self.emb_params:
            raise SchemaError("this command needs an embedding (give --p or an 'embedding' block)")
        e = self.emb_params
        try:
            return embedding_for(source, e["p"], ell, e.get("seed", 0), e.get("allow_wild", False),
                                 e.get("psi_depth", 2))
        except ValueError as exc:  # order coprimality rule, p = ell, p not prime
            raise SchemaError(f"embedding rejected: {exc}") from None

    def beta_datum(self) -> BetaDatum:
        return BetaDatum(dict(self.beta), self.beta_norm)

    def query_place(self) -> PlaceConfig:
        label = self.query.get("place")
        if label is None:
            if len(self.places) == 1:
                return self.places[0]
            raise SchemaError("query.place is required when the config has several places")
        if label not in self.by_label:
            raise SchemaError(f"query.place {label!r} is not a configured place")
        return self.by_label[label]


def load(path, p_override=None, seed_override=None) -> LoadedConfig:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config is not valid JSON: {exc}") from None
    return LoadedConfig(obj, p_override, seed_override)
