"""Exception types raised across the matching pipeline."""


class WiomatchError(Exception):
    """Base class for data errors reported by the library."""


class MalformedLine(WiomatchError):
    def __init__(self, lineno, text=""):
        super().__init__(f"malformed triple at line {lineno}: {text!r}")
        self.lineno = lineno


class CyclicList(WiomatchError):
    def __init__(self, blank_id):
        super().__init__(f"rdf:List starting at _:{blank_id} is cyclic")
        self.blank_id = blank_id


class EmptyLexicon(WiomatchError):
    pass


class DomainError(WiomatchError, ValueError):
    pass


class DisconnectedSource(WiomatchError):
    def __init__(self, source):
        super().__init__(f"source {source} has no incident edges")
        self.source = source


class SolverDivergence(WiomatchError):
    def __init__(self, residual):
        super().__init__(f"circuit solve residual {residual:.3e} above tolerance")
        self.residual = residual


class NonDownhillPath(WiomatchError):
    pass


class PcgOverflow(WiomatchError):
    def __init__(self, limit):
        super().__init__(f"pairwise connectivity graph exceeds {limit} triple pairs")
        self.limit = limit


class MalformedAlignmentLine(WiomatchError):
    def __init__(self, lineno, reason=""):
        msg = f"malformed alignment row at line {lineno}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.lineno = lineno


class ConfigError(WiomatchError):
    pass
