import logging

from fastmcp import FastMCP

from .scenario_tools import explain_check, list_scenarios, run_scenario
from .settings import settings

logger = logging.getLogger(__name__)
logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s")

logger.info(
    f"Using settings: sample_points={settings.sample_points}, "
    f"include_timings={settings.include_timings}, scenarios_dir='{settings.scenarios_dir}'"
)

mcp: FastMCP = FastMCP(
    "mcp-gkreduce",
    instructions="Exact checks of twisted Courant brackets, generalized Kähler reduction, "
    "T-duality of reduced twisting forms and Lie bialgebras. Run a bundled scenario or your own JSON scenario.",
)

mcp.tool(
    description="Run a verification scenario (bundled name or inline JSON) and return its report. "
    "Every check carries an id, an exact residual and pass/fail/not-applicable status."
)(run_scenario)

mcp.tool(description="List bundled scenarios with their kind and description.")(list_scenarios)

mcp.tool(description="Explain which identity a report check id verifies.")(explain_check)

if __name__ == "__main__":
    logger.info("Starting mcp-gkreduce server...")
    mcp.run()
