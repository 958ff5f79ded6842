"""Text formats shared repo-wide.

Matrix files: first line "rows cols field", then row-major whitespace-
separated entries; complex entries are written as "a+bi" with no spaces
(e.g. ``1.5-2.25i``).  Subspace files prepend a header line
"isotropic n i field".  CSV outputs start with a schema-version line
``# anosym-csv v1 <kind>`` and use LF endings and repr-formatted floats so
identical runs produce byte-identical files.
"""

import numpy as np

from .errors import ContractError
from .symplectic import SymplecticSpace

CSV_SCHEMA = "# anosym-csv v1"


def format_scalar(x, field):
    if field == "R":
        return repr(float(np.real(x)))
    a, b = float(np.real(x)), float(np.imag(x))
    return f"{a!r}{'+' if b >= 0 else '-'}{abs(b)!r}i"


def parse_scalar(token, field):
    if field == "R":
        return float(token)
    if not token.endswith("i"):
        return complex(float(token), 0.0)
    body = token[:-1]
    # split at the sign of the imaginary part (not an exponent sign)
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            return complex(float(body[:k]), float(body[k:]))
    raise ContractError(f"cannot parse complex entry {token!r}")


def write_matrix_text(M, field):
    M = np.asarray(M)
    lines = [f"{M.shape[0]} {M.shape[1]} {field}"]
    for row in M:
        lines.append(" ".join(format_scalar(x, field) for x in row))
    return "\n".join(lines) + "\n"


def read_matrix_text(text):
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    head = lines[0].split()
    rows, cols, field = int(head[0]), int(head[1]), head[2]
    if field not in ("R", "C"):
        raise ContractError(f"unknown field tag {field!r}")
    entries = []
    for ln in lines[1:]:
        entries.extend(parse_scalar(tok, field) for tok in ln.split())
    if len(entries) != rows * cols:
        raise ContractError("entry count does not match the header")
    dtype = np.complex128 if field == "C" else np.float64
    M = np.array(entries, dtype=dtype).reshape(rows, cols)
    if not np.all(np.isfinite(M.view(np.float64))):
        raise ContractError("matrix file has non-finite entries")
    return M, field


def write_matrix_file(path, M, field):
    with open(path, "w", newline="\n") as fh:
        fh.write(write_matrix_text(M, field))


def read_matrix_file(path):
    with open(path) as fh:
        return read_matrix_text(fh.read())


def write_subspace_text(F):
    head = f"isotropic {F.space.n} {F.dim} {F.space.field}\n"
    return head + write_matrix_text(F.basis, F.space.field)


def read_subspace_text(text):
    lines = text.strip().splitlines()
    head = lines[0].split()
    if head[0] != "isotropic":
        raise ContractError("subspace file must start with an 'isotropic' header")
    n, i, field = int(head[1]), int(head[2]), head[3]
    M, mfield = read_matrix_text("\n".join(lines[1:]))
    if mfield != field or M.shape != (2 * n, i):
        raise ContractError("subspace header disagrees with the matrix block")
    from . import symplectic

    return symplectic.isotropic_subspace(SymplecticSpace(n, field), M)


def write_subspace_file(path, F):
    with open(path, "w", newline="\n") as fh:
        fh.write(write_subspace_text(F))


def read_subspace_file(path):
    with open(path) as fh:
        return read_subspace_text(fh.read())


# ---------------------------------------------------------------------------
# CSV helpers
# ---------------------------------------------------------------------------

def csv_cell(x):
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, (np.floating,)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    text = str(x)
    if "," in text or '"' in text:
        return '"' + text.replace('"', '""') + '"'
    return text


def write_csv(path, kind, header, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(f"{CSV_SCHEMA} {kind}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(csv_cell(x) for x in row) + "\n")


def cartan_csv_row(word_text, mu):
    """CartanVector row: word, |word|, lambda_1..lambda_n, alpha_1..alpha_n."""
    from .cartan import simple_root_values

    lam = list(mu.lam)
    alph = list(simple_root_values(mu))
    return [word_text, len(word_text.split()) if word_text else 0, *lam, *alph]
