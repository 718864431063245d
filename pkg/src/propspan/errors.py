"""Exception hierarchy shared across propspan."""


class PropspanError(Exception):
    """Base class for all propspan errors."""


class UnknownTechnique(PropspanError, ValueError):
    def __init__(self, name, suggestions=()):
        self.name = name
        self.suggestions = list(suggestions)
        msg = "unknown propaganda technique %r" % name
        if self.suggestions:
            msg += "; nearest: " + ", ".join(repr(s) for s in self.suggestions)
        super().__init__(msg)


class TokenMismatch(PropspanError, ValueError):
    pass


class LengthMismatch(PropspanError, ValueError):
    pass


class UnknownId(PropspanError, KeyError):
    def __init__(self, ids):
        self.ids = list(ids)
        super().__init__("prediction ids absent from gold: %s" % ", ".join(map(str, self.ids)))

    def __str__(self):
        return self.args[0]


class DuplicateId(PropspanError, ValueError):
    def __init__(self, ids, which):
        self.ids = list(ids)
        self.which = which
        super().__init__("duplicate ids in %s: %s" % (which, ", ".join(map(str, self.ids))))


class EmptyInput(PropspanError, ValueError):
    pass


class EmptyDataset(PropspanError, ValueError):
    pass


class MalformedPair(PropspanError, ValueError):
    def __init__(self, token):
        self.token = token
        super().__init__("malformed alignment pair %r (expected i-j)" % token)


class IndexOutOfRange(PropspanError, IndexError):
    pass


class ParseError(PropspanError, ValueError):
    def __init__(self, line_no, reason):
        self.line_no = line_no
        self.reason = reason
        super().__init__("line %d: %s" % (line_no, reason))


class ValidationError(PropspanError, ValueError):
    def __init__(self, ann_id, violations):
        self.ann_id = ann_id
        self.violations = list(violations)
        super().__init__("annotation %r is invalid: %s" % (ann_id, "; ".join(self.violations)))


class CheckpointError(PropspanError, ValueError):
    pass
