"""crewlens: mine Git commit histories to recover de-facto engineering structure.

The pipeline clusters contributors three ways -- by commit-time alignment,
by per-language contribution profiles, and by topics of the source-code
identifiers they own -- and reports agreement with a declared team map.
"""

__version__ = "0.1.0"
