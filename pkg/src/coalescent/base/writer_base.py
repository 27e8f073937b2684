from __future__ import annotations
from abc import ABC, abstractmethod
from typing import Any, Dict, List

from .result_row import ResultRow

# Significant digits of every emitted float.
_FLOAT_DIGITS = 9


class ResultWriterBase(ABC):
    """
    Abstract class that acts as the base for all result writers. Output is a pure function of the rows: identical
    rows always produce identical text.
    """

    def dump(self, rows: List[ResultRow]) -> str:
        """
        Generates the result document.

        :param rows: Rows in output order.
        :type rows:  List[ResultRow]

        :return: Result document, newline terminated.
        :rtype:  str
        """
        s = self._before_rows()
        s += self._row_separator().join(
            self._row({column: self._format_value(value) for column, value in row.values().items()})
            for row in rows
        )
        s += self._after_rows()

        # Add trailing newline if required.
        if not s.endswith('\n'):
            s += '\n'
        return s

    def write(self, rows: List[ResultRow], path: str) -> ResultWriterBase:
        """
        Generates the result document and writes it to a file.

        :param rows: Rows in output order.
        :type rows:  List[ResultRow]
        :param path: Output file path.
        :type path:  str

        :return: The current writer instance.
        :rtype:  ResultWriterBase
        """
        with open(path, 'w', newline='') as f:
            f.write(self.dump(rows))
        return self

    @staticmethod
    def format_float(value: float) -> str:
        return f'{value:.{_FLOAT_DIGITS}g}'

    @abstractmethod
    def _format_value(self, value: Any) -> Any:
        """
        Abstract method which must be implemented by the deriving class to convert a single cell value (None, str,
        int or float) into its output representation.
        """
        pass

    @abstractmethod
    def _before_rows(self) -> str:
        """
        Abstract method which must be implemented by the deriving class to generate everything in front of the
        first row (e.g., a header line). If not required, this method shall return an empty string.
        """
        pass

    @abstractmethod
    def _row(self, values: Dict[str, Any]) -> str:
        """
        Abstract method which must be implemented by the deriving class to generate a single row.

        :param values: Formatted cell values in column order.
        :type values:  Dict[str, Any]

        :return: Row string.
        :rtype:  str
        """
        pass

    @abstractmethod
    def _row_separator(self) -> str:
        pass

    @abstractmethod
    def _after_rows(self) -> str:
        """
        Abstract method which must be implemented by the deriving class to generate everything after the last row.
        If not required, this method shall return an empty string.
        """
        pass
