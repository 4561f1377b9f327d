"""Built-in registry of diagram families.

Two sources feed the registry:

* ``data/families.txt`` holds the parametrized families of hyperbolic
  and anti-de Sitter examples, one block per picture::

      @ <table> <index> <title or ->
      black 4 5 6            # optional: one Lannér part of the join
      dark 4 light 5         # optional: endpoints of the inf edge
      where (p,q) != (7,4)   # optional: extra range constraint
      reference p=10 q=10    # optional: reference (lattice) parameters
      rank 6
      param p 7
      edge ...

  ``where`` accepts ``P != T,T,...`` and ``P in T,T,...`` where P is
  ``p``, ``(p,q)`` (ordered) or ``{p,q}`` (unordered).

* the irreducible spherical, affine and Lannér diagrams are generated
  by the functions at the bottom of this module.
"""
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product

from .diagram import INF, CoxeterDiagram, DiagramError, parse


class CatalogError(KeyError):
    def __str__(self):
        return self.args[0] if self.args else "catalog error"


# table aliases by number
ALIASES = {
    "table1": "esselmann",
    "table2": "Hexamples_dim4",
    "table4": "examples_dim4",
    "table5": "examples_dim5",
    "table6": "examples_dim6",
    "table7": "examples_dim7",
    "table8": "examples_dim8",
    "table9": "disconnected_ads_dim4",
    "table10": "disconnected_ads_dim6",
    "table11": "disconnected_qf_dim4",
    "table12": "disconnected_qf_dim6",
    "table13": "spherical",
    "table14": "affine",
    "table15": "lanner",
}

# expected signature kind of every family table
TABLE_KIND = {
    "esselmann": "lattice",
    "Hexamples_dim4": "qf",
    "examples_dim4": "ghc",
    "examples_dim5": "ghc",
    "examples_dim6": "ghc",
    "examples_dim7": "ghc",
    "examples_dim8": "ghc",
    "families_dim4": "family",
    "families_dim6": "family",
    "Tumarkin_dim4": "lattice",
    "Tumarkin_dim6": "lattice",
    "disconnected_ads_dim4": "disconnected_ghc",
    "disconnected_ads_dim6": "disconnected_ghc",
    "disconnected_qf_dim4": "disconnected_qf",
    "disconnected_qf_dim6": "disconnected_qf",
}


@dataclass
class Constraint:
    names: tuple
    unordered: bool
    mode: str          # "in" or "!="
    values: frozenset

    def admits(self, values):
        key = tuple(values[n] for n in self.names)
        keys = {key, tuple(sorted(key))} if self.unordered else {key}
        hit = any(k in self.values for k in keys)
        return hit if self.mode == "in" else not hit

    def text(self):
        if len(self.names) == 1:
            lhs = self.names[0]
            vals = ",".join(str(v[0]) for v in sorted(self.values))
        else:
            o, c = ("{", "}") if self.unordered else ("(", ")")
            lhs = o + ",".join(self.names) + c
            vals = ",".join(o + ",".join(map(str, v)) + c for v in sorted(self.values))
        return "%s %s %s" % (lhs, self.mode, vals)


def _parse_where(text):
    m = re.fullmatch(r"\s*(\{[^}]*\}|\([^)]*\)|\w+)\s*(!=|in)\s*(.*)", text)
    if not m:
        raise CatalogError("bad where clause %r" % text)
    lhs, mode, rhs = m.groups()
    unordered = lhs.startswith("{")
    names = tuple(re.findall(r"\w+", lhs))
    if len(names) == 1:
        values = [(int(v),) for v in rhs.split(",")]
    else:
        values = [tuple(int(x) for x in re.findall(r"\d+", t))
                  for t in re.findall(r"[({][^)}]*[)}]", rhs)]
    if unordered:
        values = [tuple(sorted(v)) for v in values]
    return Constraint(names, unordered, mode, frozenset(values))


@dataclass
class Entry:
    """One family of the registry."""
    table: str
    index: int
    title: str
    template: CoxeterDiagram
    black: tuple = ()
    dark: int = None
    light: int = None
    constraint: Constraint = None
    reference: dict = field(default_factory=dict)

    @property
    def key(self):
        return "%s:%s" % (self.table, self.title or self.index)

    @property
    def params(self):
        return sorted(self.template.params)

    def admits(self, **values):
        for name, (lo, hi) in self.template.params.items():
            v = values.get(name)
            if not isinstance(v, int) or v < lo or (hi is not None and v > hi):
                return False
        return self.constraint is None or self.constraint.admits(values)

    def instantiate(self, **values):
        if set(values) != set(self.template.params):
            raise CatalogError("%s takes parameters %s" % (self.key, self.params or "none"))
        if not self.admits(**values):
            raise CatalogError("parameters %s outside the range of %s" % (values, self.key))
        return self.template.instantiate(**values)

    def minimal_parameters(self):
        """Minimal admissible parameter tuples (componentwise order)."""
        names = self.params
        if not names:
            return [{}]
        cand = self.sample_parameters(extra=3)
        mins = []
        for c in cand:
            if not any(all(o[n] <= c[n] for n in names) and o != c for o in cand):
                mins.append(c)
        return mins

    def sample_parameters(self, extra=2):
        """Admissible parameter tuples in a small box above the minima."""
        names = self.params
        if not names:
            return [{}]
        if self.constraint is not None and self.constraint.mode == "in":
            out = []
            for v in sorted(self.constraint.values):
                perms = {v, v[::-1]} if self.constraint.unordered else {v}
                for w in sorted(perms):
                    vals = dict(zip(self.constraint.names, w))
                    if self.admits(**vals):
                        out.append(vals)
            return out
        ranges = []
        span = extra + (len(self.constraint.values) if self.constraint else 0) + 1
        for n in names:
            lo, hi = self.template.params[n]
            top = lo + span if hi is None else min(hi, lo + span)
            ranges.append(range(lo, top + 1))
        out = []
        for combo in product(*ranges):
            vals = dict(zip(names, combo))
            if self.admits(**vals):
                out.append(vals)
        return out

    def test_parameters(self):
        """Minimal parameters and each of them shifted by one.

        For finite families every listed tuple is returned.
        """
        if self.constraint is not None and self.constraint.mode == "in":
            return self.sample_parameters()
        out = []
        for m in self.minimal_parameters():
            for vals in (m, {k: v + 1 for k, v in m.items()}):
                if vals not in out and self.admits(**vals):
                    out.append(vals)
        return out

    @property
    def s1(self):
        """Nodes other than the light endpoint (0-based)."""
        return frozenset(range(self.template.rank)) - {self.light}

    @property
    def s2(self):
        return frozenset(range(self.template.rank)) - {self.dark}


def _load_families():
    text = resources.files("coxlab").joinpath("data/families.txt").read_text(encoding="utf-8")
    entries = []
    for block in re.split(r"\n(?=@ )", text):
        lines = [ln for ln in block.splitlines() if not ln.startswith("#")]
        lines = [ln for ln in lines if ln.strip()]
        if not lines:
            continue
        _, table, index, title = lines[0].split()
        meta = dict(black=(), dark=None, light=None, constraint=None, reference={})
        body = []
        for ln in lines[1:]:
            word, _, rest = ln.partition(" ")
            if word == "black":
                meta["black"] = tuple(int(x) - 1 for x in rest.split())
            elif word == "dark":
                parts = rest.split()
                meta["dark"], meta["light"] = int(parts[0]) - 1, int(parts[2]) - 1
            elif word == "where":
                meta["constraint"] = _parse_where(rest)
            elif word == "reference":
                meta["reference"] = {k: int(v) for k, v in (t.split("=") for t in rest.split())}
            else:
                body.append(ln)
        entries.append(Entry(table, int(index), None if title == "-" else title,
                             parse("\n".join(body)), **meta))
    return entries


# ---------------------------------------------------------------------
# irreducible spherical, affine and Lannér diagrams

def _path(labels):
    return [(i, i + 1, m) for i, m in enumerate(labels)]


def _diagram(rank, edges):
    return CoxeterDiagram(rank, edges)


def _star(arms):
    """Centre node 0 with arms of the given lengths, all labels 3."""
    edges, nxt = [], 1
    for length in arms:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt, 3))
            prev = nxt
            nxt += 1
    return _diagram(nxt, edges)


def spherical(name, n=None):
    """Irreducible spherical diagrams by name: A, B, D, I2, H3, H4, F4, E6, E7, E8."""
    if name == "A":
        return _diagram(n, _path([3] * (n - 1)))
    if name == "B":
        return _diagram(n, _path([3] * (n - 2) + [4]))
    if name == "D":
        return _diagram(n, _path([3] * (n - 2)) + [(n - 3, n - 1, 3)])
    if name == "I2":
        return _diagram(2, [(0, 1, n)])
    fixed = {"H3": [5, 3], "H4": [5, 3, 3], "F4": [3, 4, 3]}
    if name in fixed:
        return _diagram(len(fixed[name]) + 1, _path(fixed[name]))
    arms = {"E6": (1, 2, 2), "E7": (1, 2, 3), "E8": (1, 2, 4)}
    if name in arms:
        return _star(arms[name])
    raise CatalogError("unknown spherical type %r" % name)


def affine(name, n=None):
    """Irreducible affine diagrams (n+1 nodes for the index-n series)."""
    if name == "A":
        if n == 1:
            return _diagram(2, [(0, 1, INF)])
        return _diagram(n + 1, _path([3] * n) + [(0, n, 3)])
    if name == "B":
        return _diagram(n + 1, [(0, 2, 3)] + [(i, i + 1, 3) for i in range(1, n - 1)]
                        + [(n - 1, n, 4)])
    if name == "C":
        return _diagram(n + 1, _path([4] + [3] * (n - 2) + [4]))
    if name == "D":
        return _diagram(n + 1, [(0, 2, 3)] + [(i, i + 1, 3) for i in range(1, n - 2)]
                        + [(n - 2, n - 1, 3), (n - 2, n, 3)])
    fixed = {"G2": [6, 3], "F4": [3, 3, 4, 3]}
    if name in fixed:
        return _diagram(len(fixed[name]) + 1, _path(fixed[name]))
    arms = {"E6": (2, 2, 2), "E7": (1, 3, 3), "E8": (1, 2, 5)}
    if name in arms:
        return _star(arms[name])
    raise CatalogError("unknown affine type %r" % name)


LANNER_FIXED = {
    "path(3,5,3)": (4, _path([3, 5, 3])),
    "path(5,3,4)": (4, _path([5, 3, 4])),
    "path(5,3,5)": (4, _path([5, 3, 5])),
    "fork(5,3;3,3)": (4, [(0, 1, 5), (1, 2, 3), (1, 3, 3)]),
    "cycle(4,3,3,3)": (4, _path([4, 3, 3]) + [(3, 0, 3)]),
    "cycle(5,3,3,3)": (4, _path([5, 3, 3]) + [(3, 0, 3)]),
    "cycle(4,3,4,3)": (4, _path([4, 3, 4]) + [(3, 0, 3)]),
    "cycle(5,3,4,3)": (4, _path([5, 3, 4]) + [(3, 0, 3)]),
    "cycle(5,3,5,3)": (4, _path([5, 3, 5]) + [(3, 0, 3)]),
    "cycle(4,3,3,3,3)": (5, _path([4, 3, 3, 3]) + [(4, 0, 3)]),
    "fork(5,3,3;3,3)": (5, [(0, 1, 5), (1, 2, 3), (2, 3, 3), (2, 4, 3)]),
    "path(5,3,3,3)": (5, _path([5, 3, 3, 3])),
    "path(5,3,3,5)": (5, _path([5, 3, 3, 5])),
    "path(5,3,3,4)": (5, _path([5, 3, 3, 4])),
}


def lanner_triangle(p, q, r):
    if Fraction(1, p) + Fraction(1, q) + Fraction(1, r) >= 1 or min(p, q, r) < 3:
        raise CatalogError("triangle (%d,%d,%d) is not Lannér" % (p, q, r))
    return _diagram(3, [(0, 1, p), (1, 2, q), (0, 2, r)])


def lanner_path(p, q):
    if Fraction(1, p) + Fraction(1, q) >= Fraction(1, 2) or min(p, q) < 3:
        raise CatalogError("path (%d,%d) is not Lannér" % (p, q))
    return _diagram(3, [(0, 1, p), (1, 2, q)])


def lanner(name):
    if name not in LANNER_FIXED:
        raise CatalogError("unknown Lannér diagram %r" % name)
    rank, edges = LANNER_FIXED[name]
    return _diagram(rank, edges)


TILDE = "̃"


def _spherical_items():
    items = []
    for n in range(1, 9):
        items.append(("A_%d" % n, spherical("A", n)))
    for n in range(2, 9):
        items.append(("B_%d" % n, spherical("B", n)))
    for n in range(4, 9):
        items.append(("D_%d" % n, spherical("D", n)))
    for p in (5, 6, 7, 8, 12):
        items.append(("I_2(%d)" % p, spherical("I2", p)))
    for name in ("H3", "H4", "F4", "E6", "E7", "E8"):
        items.append(("%s_%s" % (name[0], name[1]), spherical(name)))
    return items


def _affine_items():
    items = []
    for n in range(1, 8):
        items.append(("A%s_%d" % (TILDE, n), affine("A", n)))
    for n in range(3, 8):
        items.append(("B%s_%d" % (TILDE, n), affine("B", n)))
    for n in range(2, 8):
        items.append(("C%s_%d" % (TILDE, n), affine("C", n)))
    for n in range(4, 8):
        items.append(("D%s_%d" % (TILDE, n), affine("D", n)))
    for name in ("G2", "F4", "E6", "E7", "E8"):
        items.append(("%s%s_%s" % (name[0], TILDE, name[1]), affine(name)))
    return items


LANNER_TRIANGLES = [(3, 3, 4), (3, 3, 7), (3, 4, 4), (4, 4, 4), (3, 4, 5), (5, 5, 5), (3, 3, 12)]
LANNER_PATHS = [(3, 7), (4, 5), (5, 5), (3, 10), (6, 6), (4, 12)]


def _lanner_items():
    items = [("Lanner-triangle(%d,%d,%d)" % t, lanner_triangle(*t)) for t in LANNER_TRIANGLES]
    items += [("Lanner-path(%d,%d)" % t, lanner_path(*t)) for t in LANNER_PATHS]
    items += [("Lanner-" + name, lanner(name)) for name in LANNER_FIXED]
    return items


def canonical_name(kind, name):
    """Normalize an irreducible-catalog name ("A~_2" -> "Ã_2")."""
    name = name.replace("~", TILDE)
    return unicodedata_nfc(name)


def unicodedata_nfc(text):
    import unicodedata
    return unicodedata.normalize("NFC", text)


_CLASSIFICATION = None
_FAMILIES = None


def families():
    global _FAMILIES
    if _FAMILIES is None:
        _FAMILIES = _load_families()
    return _FAMILIES


def classification_tables():
    """{"spherical": [(name, diagram)], "affine": [...], "lanner": [...]}."""
    global _CLASSIFICATION
    if _CLASSIFICATION is None:
        _CLASSIFICATION = {
            "spherical": [(unicodedata_nfc(n), d) for n, d in _spherical_items()],
            "affine": [(unicodedata_nfc(n), d) for n, d in _affine_items()],
            "lanner": [(n, d) for n, d in _lanner_items()],
        }
    return _CLASSIFICATION


def resolve_table(name):
    name = ALIASES.get(name.lower().replace(" ", ""), name)
    known = {e.table for e in families()} | set(classification_tables())
    if name not in known:
        raise CatalogError("unknown table %r" % name)
    return name


def table_names():
    seen = []
    for e in families():
        if e.table not in seen:
            seen.append(e.table)
    return seen + list(classification_tables())


def entries(table):
    table = resolve_table(table)
    return [e for e in families() if e.table == table]


def get_entry(table, item):
    """Look up a family by table and item (1-based index or title)."""
    table = resolve_table(table)
    if table in classification_tables():
        raise CatalogError("%s is a classification table; use catalog_get" % table)
    rows = entries(table)
    for e in rows:
        if str(item) == e.title or str(item) == str(e.index):
            return e
    raise CatalogError("no item %r in %s" % (item, table))


def catalog_get(table, item, **params):
    """Instantiate a registry diagram.

    For the classification tables `item` is a catalog name ("B_4",
    "Ã_2", "Lanner-path(5,3,5)") or a 1-based index; series members can
    also be requested as e.g. ("spherical", "I_2", p=7).
    """
    table = resolve_table(table)
    if table in classification_tables():
        return _classification_get(table, item, **params)
    return get_entry(table, item).instantiate(**params)


def _classification_get(table, item, **params):
    rows = classification_tables()[table]
    item_s = unicodedata_nfc(str(item).replace("~", TILDE))
    for k, (name, d) in enumerate(rows, 1):
        if item_s == name or item_s == str(k):
            if params:
                raise CatalogError("%s takes no parameters" % name)
            return d
    n = params.get("n", params.get("p"))
    series = item_s.rstrip("_").replace("_", "")
    try:
        if table == "spherical" and series in ("A", "B", "D", "I2") and n is not None:
            lo = {"A": 1, "B": 2, "D": 4, "I2": 5}[series]
            if n < lo:
                raise CatalogError("%s needs n >= %d" % (series, lo))
            return spherical(series, n)
        if table == "affine" and series in ("A" + TILDE, "B" + TILDE, "C" + TILDE, "D" + TILDE) \
                and n is not None:
            lo = {"A": 1, "B": 3, "C": 2, "D": 4}[series[0]]
            if n < lo:
                raise CatalogError("%s needs n >= %d" % (series, lo))
            return affine(series[0], n)
        if table == "lanner" and series.startswith("Lanner-triangle"):
            return lanner_triangle(params["p"], params["q"], params["r"])
        if table == "lanner" and series.startswith("Lanner-path") and "q" in params:
            return lanner_path(params["p"], params["q"])
    except (KeyError, DiagramError) as exc:
        raise CatalogError("bad parameters for %s: %s" % (item, exc)) from None
    raise CatalogError("no item %r in %s" % (item, table))


def catalog_list():
    """Registry summary: one dict per item."""
    out = []
    for e in families():
        out.append({
            "table": e.table, "index": e.index, "title": e.title, "rank": e.template.rank,
            "params": {k: list(v) for k, v in sorted(e.template.params.items())},
            "constraint": e.constraint.text() if e.constraint else None,
        })
    for table, rows in classification_tables().items():
        for k, (name, d) in enumerate(rows, 1):
            out.append({"table": table, "index": k, "title": name, "rank": d.rank,
                        "params": {}, "constraint": None})
    return out
