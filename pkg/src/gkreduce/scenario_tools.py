import asyncio
import json
import logging
from typing import Annotated, Literal

from fastmcp import Context
from mcp.types import TextContent

from . import pipelines, scenarios
from .report import explain, render_json, render_text

logger = logging.getLogger(__name__)


def _resolve(scenario: str) -> scenarios.Scenario:
    """Inline JSON when the argument starts with '{', otherwise a bundled scenario name."""
    if scenario.lstrip().startswith("{"):
        return scenarios.parse_scenario(scenario, "<inline>")
    try:
        return scenarios.load_bundled(scenario)
    except KeyError:
        raise ValueError(f"Unknown scenario '{scenario}'. Available: {', '.join(scenarios.bundled_names())}") from None


async def run_scenario(
    scenario: Annotated[str, "Name of a bundled scenario (see list_scenarios) or a complete scenario JSON document."],
    output_format: Annotated[Literal["json", "text"], "Report format (default json)."] = "json",
    include_timings: Annotated[bool, "Include per-check wall time in milliseconds."] = False,
    ctx: Context | None = None,
) -> list[TextContent]:
    """Runs every check of a scenario and returns the report."""
    try:
        loaded = _resolve(scenario)
        if ctx:
            await ctx.info(f"Running scenario '{loaded.name}' ({loaded.kind})")
            await ctx.report_progress(0, 1)
        report = await asyncio.to_thread(pipelines.run_scenario, loaded, include_timings)
        if ctx:
            await ctx.report_progress(1, 1)
            if report.failures:
                await ctx.warning(f"{len(report.failures)} check(s) failed in '{loaded.name}'")
        text = render_json(report) if output_format == "json" else render_text(report)
        return [TextContent(type="text", text=text)]
    except Exception as e:
        logger.error(f"Error in run_scenario: {e}", exc_info=True)
        error_msg = f"Error running scenario: {e}"
        if ctx:
            await ctx.error(error_msg)
        raise RuntimeError(error_msg) from e


async def list_scenarios(ctx: Context | None = None) -> list[TextContent]:
    """Lists the bundled scenarios with their kind and description."""
    try:
        rows = scenarios.catalog()
        if not rows:
            if ctx:
                await ctx.info("No bundled scenarios found")
            return [TextContent(type="text", text="No scenarios found.")]
        listing = [{"name": name, "kind": kind, "description": description} for name, kind, description in rows]
        return [TextContent(type="text", text=json.dumps(listing, indent=2))]
    except Exception as e:
        logger.error(f"Error in list_scenarios: {e}", exc_info=True)
        error_msg = f"Error listing scenarios: {e}"
        if ctx:
            await ctx.error(error_msg)
        raise RuntimeError(error_msg) from e


async def explain_check(
    check_id: Annotated[str, "A check id as it appears in reports, e.g. 'duality-residual' or 'cybe'."],
    ctx: Context | None = None,
) -> list[TextContent]:
    """Explains which identity a check id verifies."""
    try:
        return [TextContent(type="text", text=explain(check_id))]
    except Exception as e:
        logger.error(f"Error in explain_check for {check_id}: {e}", exc_info=True)
        error_msg = f"Error explaining check: {e}"
        if ctx:
            await ctx.error(error_msg)
        raise RuntimeError(error_msg) from e
