"""Open Annotation (Alpha3-style) toolkit: model, segments, temporal
resolution, store, HTTP service and CLI."""

__version__ = "0.1.0"
