from normdescent.cli import app

app(prog_name="normdescent")
