import csv
import datetime
import os

from typing import Dict, List, Optional

JOURNAL_VERSION = '# history-check journal v1'


class LabJournal():
    """
    A CSV file collecting one line per campaign under <base_dir>/testruns/lab_journal.csv.

    Lines carry a running line_number so that later tools can refer to a campaign by it.
    """
    def __init__(self, base_dir, column_names: List[str]):
        self._journal_save_dir = os.path.join(base_dir, 'testruns')
        os.makedirs(self._journal_save_dir, exist_ok=True)
        self.journal_file_name = os.path.join(self._journal_save_dir, 'lab_journal.csv')
        self.column_names = ['line_number', 'date', 'time', 'path'] + list(column_names)
        self.journal_entries = []

        if os.path.isfile(self.journal_file_name):
            # read all campaigns so far to continue the line numbering
            with open(self.journal_file_name, mode='r', newline='') as infile:
                lines = [line for line in infile if not line.startswith('#')]
            reader = csv.DictReader(lines)
            if reader.fieldnames and list(reader.fieldnames) != self.column_names:
                raise ValueError(f'{self.journal_file_name} has columns {reader.fieldnames}, expected {self.column_names}')
            self.journal_entries = list(reader)
        else:
            with open(self.journal_file_name, 'w', newline='') as outfile:
                outfile.write(JOURNAL_VERSION + '\n')
                csv.DictWriter(outfile, self.column_names).writeheader()

        if self.journal_entries:
            self.next_line_number = int(self.journal_entries[-1]['line_number']) + 1
        else:
            self.next_line_number = 0

    def _write_data(self, data_dict: Dict) -> int:
        data_dict = dict(data_dict)
        data_dict.update({'line_number': self.next_line_number})
        with open(self.journal_file_name, 'a', newline='') as outfile:
            csv.DictWriter(outfile, self.column_names, extrasaction='ignore').writerow(data_dict)

        self.journal_entries.append({k: str(v) for k, v in data_dict.items()})
        self.next_line_number += 1
        return self.next_line_number - 1    # the line number we've just written to

    def append_campaign(self, row: Dict, save_path: Optional[str] = None) -> int:
        """
        :param row: the campaign summary row
        :param save_path: where the campaign CSV went, if it was written to a file
        :return: the line number in the CSV file that was just written
        """
        now = datetime.datetime.now()
        entry = {
            'date': now.strftime("%d.%m.%Y"),
            'time': now.strftime("%H:%M:%S"),
            'path': 'file://' + os.path.abspath(save_path) if save_path else '',
        }
        entry.update(row)
        return self._write_data(entry)

    def find_line(self, line_number: int) -> Optional[Dict]:
        """
        binary search for a line number in self.journal_entries
        """
        lo, hi = 0, len(self.journal_entries) - 1
        while lo <= hi:
            center = (lo + hi) // 2
            current = int(self.journal_entries[center]['line_number'])
            if current == line_number:
                return self.journal_entries[center]
            if current < line_number:
                lo = center + 1
            else:
                hi = center - 1
        return None
