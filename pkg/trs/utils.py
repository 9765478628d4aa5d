def listing_print(title: str, lines: list[str]) -> None:
    """
    Prints a titled listing, one entry per line.

    Args:
        title: Heading shown in the banner.
        lines: The entries to print.
    """

    print(f"\n{'=' * 25} {title} {'=' * 25}")

    if not lines:
        print("(empty)")

    for line in lines:
        print(line)

    print(f"{'=' * (52 + len(title))}")
