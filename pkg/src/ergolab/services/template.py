"""
Этот модуль содержит TemplateService, который рендерит графики SVG
из строковых шаблонов Jinja2.
"""
import threading
from typing import Any, Dict

from jinja2 import Environment, StrictUndefined, Template


def format_number(value: float, digits: int = 3) -> str:
    """
    Фильтр `num`: короткая запись числа для подписей осей.

    :param value: Число.
    :param digits: Число значащих цифр.
    :return: Строка вида "0.05", "1e-06", "2.05e+03".
    """
    return f"{float(value):.{digits}g}"


class TemplateService:
    """
    Сервис рендеринга шаблонов графиков.

    Подписи экранируются, поэтому `<`, `&` и подобные символы в названиях
    не ломают разметку SVG. Скомпилированные шаблоны кэшируются по тексту:
    один и тот же шаблон рендерится для каждого графика каждого сценария,
    в том числе из потоков набора.
    """

    def __init__(self) -> None:
        # StrictUndefined генерирует ошибку при отсутствующих переменных
        self._env = Environment(undefined=StrictUndefined, autoescape=True, keep_trailing_newline=True)
        self._env.filters["num"] = format_number
        self._compiled: Dict[str, Template] = {}
        self._lock = threading.Lock()

    def render(self, template_content: str, variables: Dict[str, Any]) -> str:
        """
        Рендерит строку-шаблон с предоставленными переменными.

        :param template_content: Текст шаблона Jinja2.
        :param variables: Переменные для подстановки.
        :return: Готовая строка.
        :raises jinja2.UndefinedError: Если шаблон использует неопределенную переменную
        """
        return self._template(template_content).render(**variables)

    def _template(self, template_content: str) -> Template:
        with self._lock:
            template = self._compiled.get(template_content)
            if template is None:
                template = self._env.from_string(template_content)
                self._compiled[template_content] = template
            return template
