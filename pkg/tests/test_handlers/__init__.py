"""Тесты для обработчиков экспериментов."""
