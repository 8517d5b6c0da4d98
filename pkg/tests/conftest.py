import csv

import pytest


@pytest.fixture
def csv_writer(tmp_path):
    """Write policy/claim CSV pairs into tmp_path and return their paths."""

    def write(policies, claims, prefix=""):
        p_path = tmp_path / f"{prefix}policies.csv"
        c_path = tmp_path / f"{prefix}claims.csv"
        with open(p_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["policy_id", "entry_age"])
            w.writerows(policies)
        with open(c_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["policy_id", "claim_age"])
            w.writerows(claims)
        return p_path, c_path

    return write
