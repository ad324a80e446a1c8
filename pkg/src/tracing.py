"""OpenTelemetry tracer setup for experiments and CLI commands.

Exporter selection (via OTEL_EXPORTER_TYPE environment variable):
- "none" (default): spans are recorded but not exported
- "console": ConsoleSpanExporter, written to stderr so stdout stays machine-readable
- "otlp": OTLPSpanExporter, configured through the standard OTEL_EXPORTER_OTLP_* variables
"""

import logging
import os
import sys

from opentelemetry import trace
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import (
    BatchSpanProcessor,
    ConsoleSpanExporter,
    SimpleSpanProcessor,
    SpanExporter,
)

logger = logging.getLogger(__name__)

SERVICE_NAME = "prequential-workbench"

_provider: TracerProvider | None = None


def _build_provider() -> TracerProvider:
    resource = Resource.create(
        {
            "service.name": SERVICE_NAME,
            "service.namespace": "prequential",
            "service.instance.id": os.getenv("HOSTNAME", "local"),
        }
    )
    provider = TracerProvider(resource=resource)

    exporter_type = os.getenv("OTEL_EXPORTER_TYPE", "none").lower()
    exporter: SpanExporter | None = None
    if exporter_type == "console":
        exporter = ConsoleSpanExporter(out=sys.stderr)
        provider.add_span_processor(SimpleSpanProcessor(exporter))
    elif exporter_type == "otlp":
        try:
            from opentelemetry.exporter.otlp.proto.http.trace_exporter import (
                OTLPSpanExporter,
            )

            exporter = OTLPSpanExporter()
            provider.add_span_processor(BatchSpanProcessor(exporter))
        except ImportError:
            logger.warning("OTLP exporter not installed; spans will not be exported")
    logger.debug(f"Tracer provider created with exporter type '{exporter_type}'")
    return provider


def get_tracer(name: str) -> trace.Tracer:
    """Get a tracer from the workbench's provider (created on first use).

    Args:
        name: Instrumentation scope, typically __name__

    Returns:
        OpenTelemetry tracer
    """
    global _provider  # noqa: PLW0603
    if _provider is None:
        _provider = _build_provider()
    return _provider.get_tracer(name)


def reset_tracer_provider() -> None:
    """Drop the cached provider so the next get_tracer() re-reads the environment."""
    global _provider  # noqa: PLW0603
    if _provider is not None:
        _provider.shutdown()
    _provider = None
