"""Тесты для ergolab."""
