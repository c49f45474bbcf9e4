"""Exception types shared across the toolkit."""


class SceneforgeError(Exception):
    """Base class for all toolkit errors."""


class ParseError(SceneforgeError):
    """A file (mesh, grasp set, scene, record log) could not be parsed."""


class GeometryError(SceneforgeError):
    """Degenerate geometry: flat hulls, coincident point clouds, zero volume."""


class OracleError(SceneforgeError):
    """A reach/plan oracle raised while answering a query."""


class GenerationError(SceneforgeError):
    """Scene generation exhausted its retry budget.

    ``partial`` holds the incomplete scene that was being built, if any.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SelectionError(SceneforgeError):
    """No valid scene set was found.

    ``diagnostics`` maps rejection reason -> count so callers can see which
    constraint dominated.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ConfigurationError(SceneforgeError):
    """Inconsistent or missing configuration (e.g. grasp set absent)."""


class WidthExceededError(SceneforgeError):
    """An object is too wide for the gripper's maximum opening."""


class RenderError(SceneforgeError):
    """Rendering failed: asset missing or point behind the camera."""


class EventError(SceneforgeError):
    """A trial event carries an inconsistent flag combination."""


class DuplicateRecordError(SceneforgeError):
    """Two trial records share the same (scene, object, ordering) key."""
