"""ordered_harmonics package."""
