def execute_command(image):
    image_patch = ImagePatch(image)
    extinguishers = image_patch.find('fire extinguisher')
    chairs = image_patch.find('chair')
    if len(extinguishers) == 0 or len(chairs) == 0:
        return {'function': 'None', 'error': 'Missing chair or fire extinguisher.'}
    chairs.sort(key=lambda c: distance(c, extinguishers[0]))
    chair = chairs[0]
    return {'function': 'navigate_to_object', 'inputs': (chair.horizontal_center, chair.vertical_center), 'box': [chair.left, chair.lower, chair.right, chair.upper]}
