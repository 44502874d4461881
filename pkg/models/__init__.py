"Models Package of Coverbord"