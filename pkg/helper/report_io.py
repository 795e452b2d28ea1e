import json
import os

import galois
import pandas as pd

from helper.errors import DomainError
from helper.field_tower import field_ints, split_prime_power
from helper.ideal_codes import GeneratorMatrix


class ReportIO:
    """Reading and writing matrix files and tabular reports"""

    @staticmethod
    def matrix_to_text(matrix):
        """Serialise a generator matrix: "GF p deg modulus", "k length", then one row per line"""
        field = matrix.field
        p = field.characteristic
        degree = field.degree
        modulus = int(field.irreducible_poly)
        lines = [f"GF {p} {degree} {modulus}", f"{matrix.k} {matrix.length}"]
        for row in field_ints(matrix.rows).tolist():
            lines.append(" ".join(str(v) for v in row))
        return "\n".join(lines) + "\n"

    @staticmethod
    def matrix_from_text(text):
        """Parse the matrix file format back into a GeneratorMatrix"""
        lines = [line.strip() for line in text.splitlines() if line.strip()]
        if len(lines) < 2:
            raise DomainError("matrix file needs a field line and a size line")
        header = lines[0].split()
        if len(header) != 4 or header[0] != "GF":
            raise DomainError(f"bad field line '{lines[0]}'")
        try:
            p, degree, modulus = (int(v) for v in header[1:])
            k, length = (int(v) for v in lines[1].split())
        except ValueError:
            raise DomainError("matrix header values must be integers")

        prime, exponent = split_prime_power(p)
        if exponent != 1:
            raise DomainError(f"characteristic {p} is not prime", p=p)
        if degree % 2:
            raise DomainError(f"GF({p}^{degree}) is not of square order", degree=degree)
        poly = galois.Poly.Int(modulus, field=galois.GF(p))
        if poly.degree != degree or not poly.is_irreducible():
            raise DomainError(f"modulus {modulus} is not an irreducible polynomial of degree {degree}")
        field = galois.GF(p ** degree, irreducible_poly=poly)

        body = lines[2:]
        if len(body) != k:
            raise DomainError(f"expected {k} rows, found {len(body)}", rows=len(body))
        try:
            rows = [[int(v) for v in line.split()] for line in body]
        except ValueError:
            raise DomainError("matrix entries must be integers")
        if any(len(row) != length for row in rows):
            raise DomainError(f"every row must have {length} entries")
        if any(not 0 <= v < field.order for row in rows for v in row):
            raise DomainError(f"entries must lie in 0..{field.order - 1}")
        if k == 0:
            return GeneratorMatrix(field.Zeros((0, length)))
        return GeneratorMatrix(field(rows))

    @staticmethod
    def write_matrix(matrix, path):
        with open(path, "w", encoding="utf-8") as f:
            f.write(ReportIO.matrix_to_text(matrix))

    @staticmethod
    def read_matrix(path):
        try:
            with open(path, "r", encoding="utf-8") as f:
                text = f.read()
        except OSError as e:
            raise DomainError(f"could not read matrix file: {e}", path=str(path))
        return ReportIO.matrix_from_text(text)

    @staticmethod
    def to_json(payload):
        """Compact, key-ordered JSON so repeated runs print identical bytes"""
        return json.dumps(payload, separators=(",", ":"), sort_keys=False)

    @staticmethod
    def rows_to_frame(rows):
        frame = pd.DataFrame(rows)
        if "x" in frame.columns:
            frame = frame.sort_values("x", kind="stable").reset_index(drop=True)
        return frame

    @staticmethod
    def rows_to_csv(rows):
        return ReportIO.rows_to_frame(rows).to_csv(index=False, lineterminator="\n")

    @staticmethod
    def save_rows(rows, output_path, log_func=None):
        """Save report rows to CSV or Excel based on extension"""
        if not rows:
            if log_func:
                log_func("Error: No results to save")
            return False

        frame = ReportIO.rows_to_frame(rows)
        _, ext = os.path.splitext(output_path)
        ext = ext.lower()
        directory = os.path.dirname(output_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        if ext == ".xlsx":
            # big integers (a(n_r), 5^r) do not fit Excel numbers
            for col in frame.columns:
                if frame[col].map(lambda v: isinstance(v, int) and abs(v) >= 2 ** 53).any():
                    frame[col] = frame[col].astype(str)
            frame.to_excel(output_path, index=False, engine="openpyxl")
        else:
            frame.to_csv(output_path, index=False, lineterminator="\n")
        if log_func:
            log_func(f"Saved {len(frame)} rows to {output_path}")
        return True

    @staticmethod
    def load_rows(path):
        """Read a report written by save_rows"""
        _, ext = os.path.splitext(path)
        if ext.lower() == ".xlsx":
            return pd.read_excel(path, engine="openpyxl")
        return pd.read_csv(path)
