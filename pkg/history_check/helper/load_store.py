import json
import os
import sys

import pandas as pd

from typing import Dict, List, Optional

from history_check.environment.pauli import PauliString

STATS_VERSION = '# history-check stats v1'


def dump_directory(base_dir: str, name: str) -> str:
    """ <base_dir>/testruns/<name>, created if missing """
    path = os.path.join(base_dir, 'testruns', name)
    os.makedirs(path, exist_ok=True)
    return path


def save_json(path: str, data) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w') as outfile:
        outfile.write(json.dumps(data, indent=4))
        outfile.write('\n')
    return path


def hamiltonian_document(H) -> Dict:
    return {
        'label': H.label,
        'm': H.m,
        'sum_abs': H.sum_abs,
        'identity_shift': H.identity_shift,
        'terms': H.to_records(),
    }


def save_dump(save_dir: str, H0, H1, report: Dict) -> List[str]:
    """
    writes H0.json, H1.json and dump.json into save_dir

    :return: the written file names
    """
    os.makedirs(save_dir, exist_ok=True)
    return [
        save_json(os.path.join(save_dir, 'H0.json'), hamiltonian_document(H0)),
        save_json(os.path.join(save_dir, 'H1.json'), hamiltonian_document(H1)),
        save_json(os.path.join(save_dir, 'dump.json'), report),
    ]


def load_hamiltonian_terms(path: str) -> List[PauliString]:
    """ reads the term list back from an H0.json / H1.json export """
    with open(path, 'r') as infile:
        document = json.load(infile)
    return [PauliString(record['word'], record['coeff']) for record in document['terms']]


def _open_out(path: Optional[str]):
    if path is None or path == '-':
        return sys.stdout, False
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    return open(path, 'w', newline=''), True


def write_transcript(transcript, path: Optional[str] = None):
    """ JSON-lines transcript to a file, or stdout for None and '-' """
    outfile, close = _open_out(path)
    try:
        for line in transcript.lines():
            outfile.write(line + '\n')
    finally:
        if close:
            outfile.close()


def write_stats_csv(rows: List[Dict], columns: List[str], path: Optional[str] = None):
    """ the campaign CSV: a version comment line, then the header and one row per campaign """
    frame = pd.DataFrame(rows, columns=columns)
    outfile, close = _open_out(path)
    try:
        outfile.write(STATS_VERSION + '\n')
        frame.to_csv(outfile, index=False, float_format='%.10g', lineterminator='\n')
    finally:
        if close:
            outfile.close()


def read_stats_csv(path: str) -> pd.DataFrame:
    return pd.read_csv(path, comment='#')
