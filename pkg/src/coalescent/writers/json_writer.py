import json
from typing import Any, Dict

from ..base.writer_base import ResultWriterBase

_INDENT = 2


class JsonWriter(ResultWriterBase):
    """
    JSON result writer, emits an array of row objects keyed by column name. For more information about the writer
    methods, refer to ResultWriterBase.
    """

    def _format_value(self, value: Any) -> Any:
        # Round floats to the same significant digits as the CSV output.
        if isinstance(value, float):
            return float(self.format_float(value))
        return value

    def _before_rows(self) -> str:
        return '[\n'

    def _row(self, values: Dict[str, Any]) -> str:
        lines = json.dumps(values, indent=_INDENT).split('\n')
        return '\n'.join(' ' * _INDENT + line for line in lines)

    def _row_separator(self) -> str:
        return ',\n'

    def _after_rows(self) -> str:
        return '\n]\n'
