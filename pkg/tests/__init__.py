"""pyhausdorff tests."""
