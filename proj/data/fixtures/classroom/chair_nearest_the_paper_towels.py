def execute_command(image):
    image_patch = ImagePatch(image)
    towels = image_patch.find('paper towels')
    chairs = image_patch.find('chair')
    if len(towels) == 0 or len(chairs) == 0:
        return {'function': 'None', 'error': 'Missing paper towels or chair.'}
    chairs.sort(key=lambda c: distance(c, towels[0]))
    chair = chairs[0]
    return {'function': 'navigate_to_object', 'inputs': (chair.horizontal_center, chair.vertical_center), 'box': [chair.left, chair.lower, chair.right, chair.upper]}
