"""Risk-aware active debris removal mission planner."""

__version__ = "0.1.0"
