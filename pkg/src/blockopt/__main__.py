from blockopt.cli import main

main()
