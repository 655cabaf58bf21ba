from parity_complement.main import main

main()
