"""Report and plan rendering."""
