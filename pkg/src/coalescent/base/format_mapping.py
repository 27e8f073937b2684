from __future__ import annotations
from typing import List, Type

from ..writers.csv_writer import CsvWriter
from ..writers.json_writer import JsonWriter

from .experiment_config import OutputFormat
from .writer_base import ResultWriterBase


class UnknownOutputFormatException(Exception):
    def __init__(self, output_format: str):
        super().__init__(f'Unknown output format {output_format}')


class FormatMapping:
    """
    Container to create a link between an output format name, its OutputFormat value and the writer class.
    """
    def __init__(self, name: str, type: OutputFormat, writer_type: Type[ResultWriterBase]):
        """
        Constructor

        :param name:        Format name (e.g., csv).
        :type name:         str
        :param type:        Format type (e.g., OutputFormat.CSV).
        :type type:         OutputFormat
        :param writer_type: Writer (derivate of the ResultWriterBase class) (e.g., CsvWriter).
        :type writer_type:  Type[ResultWriterBase]
        """
        self.name = name
        self.type = type
        self.writer_type = writer_type

    @staticmethod
    def get_mappings() -> List[FormatMapping]:
        """
        Returns a list of all valid format mappings. IMPORTANT: If a format is not included here, results cannot be
        written in it.

        :return: List of supported formats.
        :rtype:  List[FormatMapping]
        """
        return [
            FormatMapping('csv', OutputFormat.CSV, CsvWriter),
            FormatMapping('json', OutputFormat.JSON, JsonWriter),
        ]

    @staticmethod
    def writer_for(output_format: OutputFormat) -> ResultWriterBase:
        """
        Creates the writer for an output format.

        :param output_format: Requested format.
        :type output_format:  OutputFormat

        :raises UnknownOutputFormatException: Raised if no writer is registered for the format.

        :return: Writer instance.
        :rtype:  ResultWriterBase
        """
        found = [mapping.writer_type for mapping in FormatMapping.get_mappings() if mapping.type == output_format]

        if not found:
            raise UnknownOutputFormatException(output_format)
        return found[0]()
