import importlib.metadata

__version__ = importlib.metadata.version("fastmcp-gkreduce")
