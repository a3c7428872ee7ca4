# Order theory over finite posets and exact-rational domains
