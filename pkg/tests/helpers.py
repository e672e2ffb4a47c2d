from domain.models.series import QSeries, first_mismatch


def assert_same_series(f: QSeries, g: QSeries, n: int) -> None:
    mismatch = first_mismatch(f, g, n)
    assert mismatch is None, f"series differ at q^{mismatch}"
