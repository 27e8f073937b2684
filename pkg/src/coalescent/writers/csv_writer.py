import csv
import io
from typing import Any, Dict

from ..base.result_row import RESULT_COLUMNS
from ..base.writer_base import ResultWriterBase


class CsvWriter(ResultWriterBase):
    """
    CSV result writer (comma separated, LF line endings, header line first). For more information about the writer
    methods, refer to ResultWriterBase.
    """

    def _format_value(self, value: Any) -> str:
        if value is None:
            return ''
        elif isinstance(value, float):
            return self.format_float(value)
        return str(value)

    def _before_rows(self) -> str:
        return self._line(RESULT_COLUMNS)

    def _row(self, values: Dict[str, Any]) -> str:
        return self._line(list(values.values()))

    def _row_separator(self) -> str:
        return ''  # Every line already ends with a newline.

    def _after_rows(self) -> str:
        return ''

    @staticmethod
    def _line(cells) -> str:
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator='\n').writerow(cells)
        return buffer.getvalue()
