"""Test suite for the intervalroc package."""
