"""Tests for the bowley package."""
