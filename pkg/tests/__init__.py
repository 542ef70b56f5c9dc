"""Test suite for paid-features."""
