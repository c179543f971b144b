"""Интеграционные тесты для ergolab."""
