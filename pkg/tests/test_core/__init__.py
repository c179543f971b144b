"""Тесты для математического ядра."""
