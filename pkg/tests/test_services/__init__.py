"""Тесты для сервисов ergolab."""
