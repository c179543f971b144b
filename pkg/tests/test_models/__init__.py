"""Тесты для моделей ergolab."""
