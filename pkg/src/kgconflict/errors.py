"""Exception types shared across the toolkit."""


class KgConflictError(Exception):
    """Base class for all toolkit errors."""


class EntityNotFoundError(KgConflictError):
    def __init__(self, entity_id: str):
        super().__init__(f"entity not found in graph: {entity_id}")
        self.entity_id = entity_id


class SeedNotInGraphError(KgConflictError):
    pass


class NoEligibleSeedError(KgConflictError):
    def __init__(self, whitelist):
        ids = ", ".join(sorted(whitelist))
        super().__init__(f"graph contains no triplet over whitelisted relations: [{ids}]")
        self.whitelist = frozenset(whitelist)


class ConflictInfeasibleError(KgConflictError):
    pass


class TripletParseError(KgConflictError):
    def __init__(self, raw_text: str, reason: str = "no (Subject | Relation | Object) tuple found"):
        super().__init__(f"{reason}; raw output: {raw_text[:200]!r}")
        self.raw_text = raw_text


class GroupIndependenceError(KgConflictError):
    pass


class UnlocatableGroupError(KgConflictError):
    pass


class CacheMissError(KgConflictError):
    def __init__(self, key: str):
        super().__init__(f"no cached response for key {key}")
        self.key = key


class TransportError(KgConflictError):
    pass


class RecordInvariantError(KgConflictError):
    def __init__(self, record_id: str, field: str, detail: str):
        super().__init__(f"record {record_id}: invalid {field}: {detail}")
        self.record_id = record_id
        self.field = field


class RatingError(KgConflictError):
    pass


class ConfigError(KgConflictError):
    """Raised with every validation failure collected, not just the first."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
