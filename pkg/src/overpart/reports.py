"""Report records shared by the verifiers and the CLI, plus JSON I/O."""

import hashlib
import json
from dataclasses import asdict, dataclass, field


@dataclass
class CongruenceReport:
    """Outcome of checking one claim over a range of n.

    ``modulus`` 0 marks an exact (integer) identity. ``failures`` holds
    (n, value) pairs; the claim passes iff it is empty and at least one n
    was actually tested.
    """

    claim_id: str
    modulus: int
    n_range: tuple = (0, 0)
    params: dict = field(default_factory=dict)
    q_prime: int = None
    skipped: str = ""
    tested_count: int = 0
    failures: list = field(default_factory=list)
    wall_time_ms: int = 0

    @property
    def passed(self):
        return not self.failures and self.tested_count > 0

    def add_failure(self, n, value):
        self.failures.append((int(n), value))

    def body(self):
        """Deterministic content: everything except timing."""
        return {
            "claim_id": self.claim_id,
            "modulus": self.modulus,
            "params": _jsonable(self.params),
            "q_prime": self.q_prime,
            "n_range": list(self.n_range),
            "skipped": self.skipped,
            "tested_count": self.tested_count,
            "failures": [{"n": n, "value": _jsonable(v)} for n, v in self.failures],
            "pass": self.passed,
        }

    def digest(self):
        blob = json.dumps(self.body(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_json(self):
        data = self.body()
        data["wall_time_ms"] = int(self.wall_time_ms)
        data["body_sha256"] = self.digest()
        return data

    @classmethod
    def from_json(cls, data):
        try:
            rep = cls(
                claim_id=data["claim_id"],
                modulus=int(data["modulus"]),
                n_range=tuple(data.get("n_range", (0, 0))),
                params=data.get("params", {}),
                q_prime=data.get("q_prime"),
                skipped=data.get("skipped", ""),
                tested_count=int(data["tested_count"]),
                failures=[(int(f["n"]), f["value"]) for f in data["failures"]],
                wall_time_ms=int(data.get("wall_time_ms", 0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed report: {exc}") from exc
        if "pass" in data and bool(data["pass"]) != rep.passed:
            raise ValueError(f"report {rep.claim_id}: pass flag contradicts failures")
        return rep

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        mod = "exact" if self.modulus == 0 else f"mod {self.modulus}"
        return (
            f"{status}  {self.claim_id:<28} {mod:<8} tested={self.tested_count}"
            f" failures={len(self.failures)} ({self.wall_time_ms} ms)"
        )


@dataclass
class HuntRecord:
    """One (m, Q) probe. A pass only means no violation below the bound."""

    m: int
    Q: int
    bound: int
    verdict: str
    fail_n: int = None
    cached_horizon: int = 0
    note: str = ""

    @property
    def label(self):
        return {"pass": "inconclusive-positive", "fail": "refuted"}.get(self.verdict, "inconclusive")

    def to_json(self):
        data = asdict(self)
        data["label"] = self.label
        data["heuristic"] = True
        return data


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, int):
        return int(v)
    if hasattr(v, "numerator") and hasattr(v, "denominator"):
        return str(v)
    try:
        return int(v)
    except (TypeError, ValueError):
        return str(v)


def dump_reports(reports, fh):
    json.dump([r.to_json() for r in reports], fh, indent=2, sort_keys=True)
    fh.write("\n")


def load_reports(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not JSON ({exc})") from exc
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise ValueError(f"{path}: expected a report or a list of reports")
    return [CongruenceReport.from_json(d) for d in data]


def merge_reports(reports):
    """Reproduction matrix keyed by claim_id; conflicting duplicates raise."""
    matrix = {}
    for rep in reports:
        prev = matrix.get(rep.claim_id)
        if prev is not None and prev.digest() != rep.digest():
            raise ValueError(f"conflicting reports for claim {rep.claim_id!r}")
        matrix.setdefault(rep.claim_id, rep)
    return dict(sorted(matrix.items()))
