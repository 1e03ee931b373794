"""Linear network coding for two-unicast-Z networks."""
