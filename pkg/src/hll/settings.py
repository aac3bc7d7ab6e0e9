"""Process-wide bounds (the CLI flags --enum-bound / --precision write here)."""


class _Settings:
    enum_bound = 10 ** 6
    precision = None  # overrides LocalFieldDesc.n_max when set by the CLI


settings = _Settings()


def check_bound(size, what="enumeration"):
    from .errors import EnumerationBoundError
    if size > settings.enum_bound:
        raise EnumerationBoundError(
            f"{what} of size {size} exceeds the enumeration bound {settings.enum_bound}")
