from voronoi_distill.cli import cli

if __name__ == "__main__":
    cli()
