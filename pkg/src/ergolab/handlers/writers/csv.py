"""
Этот модуль содержит реализацию CsvWriter, который отвечает
за запись таблиц результатов в CSV.
"""
from pathlib import Path

import pandas as pd

from ergolab.models.results import ResultTable
from .base import BaseWriter

FLOAT_FORMAT = "%.12g"


class CsvWriter(BaseWriter):
    """
    Writer таблиц: запятая как разделитель, точка как десятичный знак,
    перевод строки LF, UTF-8 и строка заголовка. Вывод детерминирован:
    одинаковые таблицы дают побайтно одинаковые файлы.
    """

    suffix = ".csv"

    def render(self, table: ResultTable) -> str:
        frame = pd.DataFrame(table.rows, columns=table.columns)
        return frame.to_csv(index=False, lineterminator="\n", float_format=FLOAT_FORMAT)

    def write(self, path: Path, payload: ResultTable) -> None:
        self._fs.write_file(path, self.render(payload))
