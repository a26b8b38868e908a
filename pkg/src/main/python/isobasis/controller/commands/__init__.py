from . import construct, count, report, scan, search, si, verify

__all__ = ["construct", "verify", "search", "scan", "si", "report", "count"]
